"""The transferred evaluation heuristics and the 25-weight scaling vector.

Twelve chess-derived terms score a position from Gold's point of view: the
scaled material total plus ten dynamic components, combined into a weighted
heuristic total.  The weight vector ``theta`` has 25 entries: 14 piece-value
scales (every kind except the King, in kind-code order) followed by 11
component weights (material total first, then the dynamic components in
:data:`COMPONENT_NAMES` order).  The all-ones vector reproduces the plain
chess-value baseline.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .board import (
    BASILISK,
    CLERIC,
    DRAGON,
    DWARF,
    ELEMENTAL,
    GRIFFIN,
    HERO,
    KING,
    MAGE,
    OLIPHANT,
    PALADIN,
    Position,
    SYLPH,
    THIEF,
    UNICORN,
    WARRIOR,
)
from .errors import DataError, DomainError
from .tables import BASE_VALUES, TABLES

THETA_SIZE = 25

# Kinds scaled by theta[0..13], in kind-code order (the King is never scaled).
SCALED_KINDS = (
    SYLPH,
    GRIFFIN,
    DRAGON,
    WARRIOR,
    OLIPHANT,
    UNICORN,
    HERO,
    THIEF,
    CLERIC,
    MAGE,
    PALADIN,
    BASILISK,
    DWARF,
    ELEMENTAL,
)

COMPONENT_NAMES = (
    "material",
    "psqt",
    "mobility",
    "king_safety",
    "threats",
    "passed_pieces",
    "pawn_count",
    "imbalance",
    "space",
    "activity_penalty",
    "dragon_center",
)

PSQT_TABLE_NAMES = ("pawn", "knight", "bishop", "rook", "queen", "king")


def identity_theta() -> np.ndarray:
    """The direct-transfer baseline: every scale and component weight 1.0."""
    return np.ones(THETA_SIZE, dtype=np.float64)


def check_theta(theta) -> np.ndarray:
    arr = np.asarray(theta, dtype=np.float64)
    if arr.shape != (THETA_SIZE,):
        raise DomainError(f"theta must have {THETA_SIZE} entries, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("theta entries must be finite")
    return arr


def piece_values(theta) -> np.ndarray:
    """Theta-scaled centipawn value per kind code; the King entry stays fixed."""
    theta = check_theta(theta)
    vals = BASE_VALUES.copy()
    for i, kind in enumerate(SCALED_KINDS):
        vals[kind] = BASE_VALUES[kind] * theta[i]
    vals[KING] = BASE_VALUES[KING]
    return vals


def component_weights(theta) -> np.ndarray:
    return check_theta(theta)[14:25].copy()


def save_theta(theta, path) -> None:
    theta = check_theta(theta)
    Path(path).write_text("".join(f"{repr(float(w))}\n" for w in theta))


def load_theta(path) -> np.ndarray:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) != THETA_SIZE:
        raise DataError(f"theta file needs {THETA_SIZE} numbers, got {len(lines)}")
    try:
        return np.array([float(ln) for ln in lines], dtype=np.float64)
    except ValueError as exc:
        raise DataError(f"bad theta entry: {exc}") from exc


# --- piece-square tables ------------------------------------------------------


def load_psqt(path=None) -> np.ndarray:
    """Parse the 6 named 8x8 tables; defaults to the packaged data file."""
    if path is None:
        text = (
            importlib.resources.files("dragonfish.data").joinpath("psqt.txt").read_text()
        )
    else:
        text = Path(path).read_text()
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    tables = np.zeros((6, 8, 8), dtype=np.float64)
    seen = set()
    i = 0
    while i < len(tokens):
        name = tokens[i]
        if name not in PSQT_TABLE_NAMES:
            raise DataError(f"unexpected token {name!r} in PSQT file")
        if name in seen:
            raise DataError(f"duplicate PSQT table {name!r}")
        seen.add(name)
        cls = PSQT_TABLE_NAMES.index(name)
        values = tokens[i + 1 : i + 65]
        if len(values) != 64:
            raise DataError(f"PSQT table {name!r} needs 64 values")
        try:
            tables[cls] = np.array([float(v) for v in values]).reshape(8, 8)
        except ValueError as exc:
            raise DataError(f"bad PSQT value in {name!r}: {exc}") from exc
        i += 65
    if seen != set(PSQT_TABLE_NAMES):
        raise DataError(f"PSQT file missing tables: {set(PSQT_TABLE_NAMES) - seen}")
    return tables


_default_psqt: np.ndarray | None = None


def default_psqt() -> np.ndarray:
    global _default_psqt
    if _default_psqt is None:
        _default_psqt = load_psqt()
    return _default_psqt


# --- components ---------------------------------------------------------------


def raw_component_values(position: Position, psqt_tables=None):
    """(signed per-kind counts, the ten dynamic raw terms) straight from the kernel."""
    psqt_arr = default_psqt() if psqt_tables is None else np.asarray(psqt_tables, float)
    counts, comps = kernels.raw_components(position.cells, psqt_arr, TABLES)
    return counts, comps


def material(position: Position, theta=None) -> float:
    """Scaled piece values summed Gold-minus-Scarlet; Kings count unscaled."""
    theta = identity_theta() if theta is None else check_theta(theta)
    counts, _ = raw_component_values(position)
    vals = piece_values(theta)
    return float(np.dot(counts[1:], vals[1:]))


def _component(position: Position, index: int) -> float:
    _, comps = raw_component_values(position)
    return float(comps[index])


def psqt(position: Position) -> float:
    return _component(position, 0)


def mobility(position: Position) -> float:
    return _component(position, 1)


def king_safety(position: Position) -> float:
    if kernels.find_king(position.cells, 1) < 0 or kernels.find_king(position.cells, -1) < 0:
        raise DomainError("king_safety needs both Kings on the board")
    return _component(position, 2)


def threats(position: Position) -> float:
    return _component(position, 3)


def passed_pieces(position: Position) -> float:
    return _component(position, 4)


def pawn_count(position: Position) -> float:
    return _component(position, 5)


def imbalance(position: Position) -> float:
    return _component(position, 6)


def space(position: Position) -> float:
    return _component(position, 7)


def activity_penalty(position: Position) -> float:
    return _component(position, 8)


def dragon_center(position: Position) -> float:
    return _component(position, 9)


@dataclass
class EvalBreakdown:
    """Raw per-component scores (Gold-positive) plus the weighted total."""

    components: dict[str, float]
    total: float

    def as_dict(self) -> dict:
        return {"components": dict(self.components), "total": self.total}


def evaluate(position: Position, theta=None, psqt_tables=None) -> EvalBreakdown:
    theta = identity_theta() if theta is None else check_theta(theta)
    counts, comps = raw_component_values(position, psqt_tables)
    vals = piece_values(theta)
    mat = float(np.dot(counts[1:], vals[1:]))
    weights = component_weights(theta)
    raw = {"material": mat}
    for name, value in zip(COMPONENT_NAMES[1:], comps):
        raw[name] = float(value)
    total = float(np.dot(weights, [raw[name] for name in COMPONENT_NAMES]))
    return EvalBreakdown(components=raw, total=total)


def heuristic_total(position: Position, theta=None, psqt_tables=None) -> float:
    """Weighted sum of all components, from Gold's perspective."""
    theta = identity_theta() if theta is None else check_theta(theta)
    psqt_arr = default_psqt() if psqt_tables is None else np.asarray(psqt_tables, float)
    return float(
        kernels.eval_total(
            position.cells, piece_values(theta), component_weights(theta), psqt_arr, TABLES
        )
    )
