"""Local HTTP/JSON service exposing the engine to interactive clients.

Sessions live in memory; one session is locked while a request mutates it, so
per-session ordering is serial while distinct sessions proceed concurrently.

    POST /games                     create a session
    GET  /games/{id}                full state payload
    GET  /games/{id}/legal          legal moves of the side to move
    POST /games/{id}/moves          submit a human move (text notation)
    POST /games/{id}/engine-move    let the configured engine reply
    GET  /games/{id}/eval           evaluation breakdown of the current position
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .board import GOLD, Move, Position, SCARLET, apply_move, initial_position, to_dpn
from .errors import DataError, DomainError
from .evaluation import evaluate, identity_theta, load_theta
from .movegen import (
    GameResult,
    format_move,
    is_frozen,
    legal_moves,
    parse_squares,
    terminal_state,
)
from .search import AgentConfig, MINIMAX, RANDOM, minimax_agent, random_agent, search_report
from .presets import preset_theta


class ControllerSpec(BaseModel):
    """One side of a session: a human, or an engine configuration."""

    type: str = "human"  # human | minimax | random
    depth: int | None = None
    time_ms: int | None = None
    theta: list[float] | str | None = None  # 25 numbers, a preset name, or None
    seed: int = 0

    def to_agent(self) -> AgentConfig | None:
        if self.type == "human":
            return None
        if self.type == "random":
            return random_agent(seed=self.seed)
        if self.type == "minimax":
            theta = None
            theta_name = "identity"
            if isinstance(self.theta, str):
                theta = preset_theta(self.theta)
                theta_name = self.theta
            elif self.theta is not None:
                theta = np.asarray(self.theta, dtype=np.float64)
                theta_name = "custom"
            depth = self.depth
            time_ms = self.time_ms
            if depth is None and time_ms is None:
                time_ms = 3000  # tournament-style default budget
            return minimax_agent(
                depth=depth, theta=theta, theta_name=theta_name,
                time_budget_ms=time_ms, seed=self.seed,
            )
        raise DataError(f"unknown controller type {self.type!r}")


class CreateGameRequest(BaseModel):
    gold: ControllerSpec = Field(default_factory=ControllerSpec)
    scarlet: ControllerSpec = Field(default_factory=ControllerSpec)


class MoveRequest(BaseModel):
    move: str


class EngineMoveRequest(BaseModel):
    depth: int | None = None
    time_ms: int | None = None


@dataclass
class GameSession:
    session_id: str
    position: Position
    controllers: dict[int, ControllerSpec]
    history: list[str] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    engine_pending: bool = False

    @property
    def result(self) -> GameResult:
        return terminal_state(self.position)


def _side_name(side: int) -> str:
    return "gold" if side == GOLD else "scarlet"


def _controller_payload(spec: ControllerSpec) -> dict:
    return spec.model_dump()


def _move_payload(move: Move) -> dict:
    return {
        "from": move.from_sq,
        "to": move.to_sq,
        "kind": move.kind.name.lower(),
        "captured": move.captured,
        "notation": format_move(move),
    }


def _state_payload(session: GameSession) -> dict:
    position = session.position
    result = session.result
    frozen = [
        sq
        for sq in range(96, 192)
        if position.cells[sq] != 0 and is_frozen(position, sq)
    ]
    return {
        "id": session.session_id,
        "dpn": to_dpn(position),
        "cells": [int(v) for v in position.cells],
        "side_to_move": _side_name(position.side_to_move),
        "ply_count": position.ply_count,
        "halfmove_clock": position.halfmove_clock_for_draw,
        "status": "ongoing" if result == GameResult.ONGOING else "finished",
        "result": None if result == GameResult.ONGOING else result.value,
        "history": list(session.history),
        "frozen": frozen,
        "controllers": {
            "gold": _controller_payload(session.controllers[GOLD]),
            "scarlet": _controller_payload(session.controllers[SCARLET]),
        },
        "engine_pending": session.engine_pending,
    }


def create_app() -> FastAPI:
    app = FastAPI(title="dragonfish", version="0.1.0")
    sessions: dict[str, GameSession] = {}

    def get_session(game_id: str) -> GameSession:
        session = sessions.get(game_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {game_id}")
        return session

    @app.post("/games")
    def create_game(request: CreateGameRequest) -> dict:
        for spec in (request.gold, request.scarlet):
            try:
                spec.to_agent()  # validate early
            except (DataError, DomainError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        session = GameSession(
            session_id=uuid.uuid4().hex[:12],
            position=initial_position(),
            controllers={GOLD: request.gold, SCARLET: request.scarlet},
        )
        sessions[session.session_id] = session
        return _state_payload(session)

    @app.get("/games/{game_id}")
    def get_state(game_id: str) -> dict:
        return _state_payload(get_session(game_id))

    @app.get("/games/{game_id}/legal")
    def get_legal(game_id: str) -> dict:
        session = get_session(game_id)
        with session.lock:
            if session.result != GameResult.ONGOING:
                return {"side": _side_name(session.position.side_to_move), "moves": []}
            moves = legal_moves(session.position).moves
            return {
                "side": _side_name(session.position.side_to_move),
                "moves": [_move_payload(m) for m in moves],
            }

    @app.post("/games/{game_id}/moves")
    def post_move(game_id: str, request: MoveRequest) -> dict:
        session = get_session(game_id)
        with session.lock:
            if session.result != GameResult.ONGOING:
                raise HTTPException(status_code=409, detail="game is finished")
            position = session.position
            try:
                from_sq, to_sq, suffix = parse_squares(request.move)
            except DataError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            legal = legal_moves(position).moves
            match = next(
                (m for m in legal if m.from_sq == from_sq and m.to_sq == to_sq), None
            )
            if match is None:
                raise HTTPException(
                    status_code=409,
                    detail={
                        "error": f"illegal move {request.move!r}",
                        "legal": [format_move(m) for m in legal],
                    },
                )
            session.position = apply_move(position, match)
            session.history.append(format_move(match))
            return _state_payload(session)

    @app.post("/games/{game_id}/engine-move")
    def engine_move(game_id: str, request: EngineMoveRequest | None = None) -> dict:
        session = get_session(game_id)
        with session.lock:
            if session.engine_pending:
                raise HTTPException(status_code=409, detail="engine move already running")
            if session.result != GameResult.ONGOING:
                raise HTTPException(status_code=409, detail="game is finished")
            side = session.position.side_to_move
            spec = session.controllers[side]
            if spec.type == "human":
                raise HTTPException(
                    status_code=409, detail=f"{_side_name(side)} is human-controlled"
                )
            if request is not None and (request.depth or request.time_ms):
                spec = spec.model_copy(
                    update={"depth": request.depth, "time_ms": request.time_ms}
                )
            session.engine_pending = True
            try:
                agent = spec.to_agent()
                report = search_report(session.position, agent)
                session.position = apply_move(session.position, report.move)
                session.history.append(format_move(report.move))
            finally:
                session.engine_pending = False
            breakdown = evaluate(session.position, _session_theta(session))
            return {
                "move": _move_payload(report.move),
                "value": report.value,
                "depth": report.depth,
                "state": _state_payload(session),
                "eval": breakdown.as_dict(),
            }

    @app.get("/games/{game_id}/eval")
    def get_eval(game_id: str) -> dict:
        session = get_session(game_id)
        with session.lock:
            breakdown = evaluate(session.position, _session_theta(session))
            return breakdown.as_dict()

    return app


def _session_theta(session: GameSession) -> np.ndarray:
    """Display theta: the first engine controller's weights, else identity."""
    for side in (GOLD, SCARLET):
        spec = session.controllers[side]
        if spec.type == "minimax" and spec.theta is not None:
            if isinstance(spec.theta, str):
                return preset_theta(spec.theta)
            return np.asarray(spec.theta, dtype=np.float64)
    return identity_theta()


def serve(host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
