"""Covariance Matrix Adaptation Evolution Strategy over the 25 heuristic weights.

Standard rank-mu CMA-ES (maximizing): log-rank recombination weights,
cumulative step-size adaptation and rank-one plus rank-mu covariance updates
with the textbook constants.  Fitness is the win rate of a candidate agent
over seeded games against a fixed opponent pool; all candidates of one
generation face identical game seeds (common random numbers).
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, DomainError, NumericError
from .evaluation import identity_theta
from .search import AgentConfig, minimax_agent, play_game
from .seeding import derive_seed

logger = logging.getLogger(__name__)

EIGEN_FLOOR = 1e-12
CHECKPOINT_FORMAT = "dragonfish-cmaes-checkpoint"
CHECKPOINT_VERSION = 1


def default_lambda(dimension: int) -> int:
    return 4 + int(np.floor(3 * np.log(dimension)))


@dataclass
class CmaState:
    """Full strategy state; one generation advances via :func:`ask` / :func:`tell`."""

    mean: np.ndarray
    sigma: float
    C: np.ndarray
    p_sigma: np.ndarray
    p_c: np.ndarray
    generation: int
    lam: int
    mu: int
    weights: np.ndarray
    mueff: float
    c_sigma: float
    d_sigma: float
    c_c: float
    c_1: float
    c_mu: float
    chi_n: float

    @property
    def dimension(self) -> int:
        return self.mean.shape[0]


def init_state(initial_mean, sigma: float = 0.3, lam: int | None = None) -> CmaState:
    mean = np.asarray(initial_mean, dtype=np.float64).copy()
    n = mean.shape[0]
    if lam is None:
        lam = default_lambda(n)
    if lam < 2:
        raise DomainError("population size must be at least 2")
    mu = lam // 2
    raw = np.log(lam / 2 + 0.5) - np.log(np.arange(1, mu + 1))
    weights = raw / raw.sum()
    mueff = float(1.0 / np.sum(weights**2))
    c_sigma = (mueff + 2) / (n + mueff + 5)
    d_sigma = 1 + 2 * max(0.0, np.sqrt((mueff - 1) / (n + 1)) - 1) + c_sigma
    c_c = (4 + mueff / n) / (n + 4 + 2 * mueff / n)
    c_1 = 2 / ((n + 1.3) ** 2 + mueff)
    c_mu = min(1 - c_1, 2 * (mueff - 2 + 1 / mueff) / ((n + 2) ** 2 + mueff))
    chi_n = np.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n**2))
    return CmaState(
        mean=mean,
        sigma=float(sigma),
        C=np.eye(n),
        p_sigma=np.zeros(n),
        p_c=np.zeros(n),
        generation=0,
        lam=lam,
        mu=mu,
        weights=weights,
        mueff=mueff,
        c_sigma=float(c_sigma),
        d_sigma=float(d_sigma),
        c_c=float(c_c),
        c_1=float(c_1),
        c_mu=float(c_mu),
        chi_n=float(chi_n),
    )


def _decompose(C: np.ndarray):
    """Symmetrize, eigendecompose and floor the spectrum; reject NaN/inf."""
    C = (C + C.T) / 2.0
    if not np.all(np.isfinite(C)):
        raise NumericError("covariance matrix contains non-finite entries")
    eigvals, eigvecs = np.linalg.eigh(C)
    if not np.all(np.isfinite(eigvals)):
        raise NumericError("covariance eigendecomposition failed")
    eigvals = np.maximum(eigvals, EIGEN_FLOOR)
    return eigvals, eigvecs


def ask(state: CmaState, rng: np.random.Generator) -> list[np.ndarray]:
    """Sample lambda candidates from N(mean, sigma^2 C)."""
    eigvals, eigvecs = _decompose(state.C)
    transform = eigvecs * np.sqrt(eigvals)
    z = rng.standard_normal((state.lam, state.dimension))
    return [state.mean + state.sigma * (transform @ zi) for zi in z]


def tell(state: CmaState, candidates, fitnesses) -> CmaState:
    """Rank-based update of mean, paths, covariance and step size.

    Fitness is maximized; ties keep candidate order (stable sort); non-finite
    fitnesses are demoted to worst rank with a warning.
    """
    X = np.asarray(candidates, dtype=np.float64)
    f = np.asarray(fitnesses, dtype=np.float64).copy()
    if X.shape != (state.lam, state.dimension):
        raise DomainError(f"expected {state.lam} candidates of dim {state.dimension}")
    if f.shape != (state.lam,):
        raise DomainError("need exactly one fitness per candidate")
    bad = ~np.isfinite(f)
    if bad.any():
        logger.warning("rejecting %d non-finite fitness values (worst rank)", bad.sum())
        f[bad] = -np.inf

    n = state.dimension
    order = np.argsort(-f, kind="stable")
    selected = X[order[: state.mu]]

    mean_old = state.mean
    mean_new = state.weights @ selected
    y = (mean_new - mean_old) / state.sigma

    eigvals, eigvecs = _decompose(state.C)
    inv_sqrt = eigvecs @ np.diag(1.0 / np.sqrt(eigvals)) @ eigvecs.T

    cs, ds, cc, c1, cmu = state.c_sigma, state.d_sigma, state.c_c, state.c_1, state.c_mu
    p_sigma = (1 - cs) * state.p_sigma + np.sqrt(cs * (2 - cs) * state.mueff) * (inv_sqrt @ y)
    norm_ps = float(np.linalg.norm(p_sigma))
    denom = np.sqrt(1 - (1 - cs) ** (2 * (state.generation + 1)))
    hsig = norm_ps / denom / state.chi_n < 1.4 + 2 / (n + 1)
    p_c = (1 - cc) * state.p_c + hsig * np.sqrt(cc * (2 - cc) * state.mueff) * y

    artmp = (selected - mean_old) / state.sigma
    C = (
        (1 - c1 - cmu) * state.C
        + c1 * (np.outer(p_c, p_c) + (1 - hsig) * cc * (2 - cc) * state.C)
        + cmu * artmp.T @ np.diag(state.weights) @ artmp
    )
    C = (C + C.T) / 2.0

    sigma = state.sigma * float(np.exp((cs / ds) * (norm_ps / state.chi_n - 1)))

    return CmaState(
        mean=mean_new,
        sigma=sigma,
        C=C,
        p_sigma=p_sigma,
        p_c=p_c,
        generation=state.generation + 1,
        lam=state.lam,
        mu=state.mu,
        weights=state.weights,
        mueff=state.mueff,
        c_sigma=state.c_sigma,
        d_sigma=state.d_sigma,
        c_c=state.c_c,
        c_1=state.c_1,
        c_mu=state.c_mu,
        chi_n=state.chi_n,
    )


def covariance_spectrum(state: CmaState) -> np.ndarray:
    eigvals, _ = _decompose(state.C)
    return eigvals


# --- game-based fitness -----------------------------------------------------------


@dataclass
class FitnessSpec:
    """Win-rate fitness: the candidate plays a balanced, seeded schedule against
    a fixed opponent pool; win 1, draw 0.5, loss 0."""

    opponents: list[AgentConfig]
    games_per_opponent: int = 2
    depth: int = 2
    candidate_seed: int = 0

    def __post_init__(self):
        if self.games_per_opponent < 1:
            raise DomainError("need at least one game per opponent")
        if not self.opponents:
            raise DomainError("opponent pool is empty")


def _candidate_agent(theta: np.ndarray, spec: FitnessSpec) -> AgentConfig:
    return minimax_agent(
        depth=spec.depth, theta=theta, theta_name="candidate", seed=spec.candidate_seed
    )


def evaluate_fitness(theta, spec: FitnessSpec, seed: int) -> float:
    """(wins + draws/2) / games over the spec's schedule.

    Games come in color-paired blocks with mirrored seeds, so a candidate
    identical to its opponent scores exactly 0.5.
    """
    theta = np.asarray(theta, dtype=np.float64)
    candidate = _candidate_agent(theta, spec)
    score = 0.0
    games = 0
    for opp_index, opponent in enumerate(spec.opponents):
        for g in range(spec.games_per_opponent):
            game_seed = derive_seed(seed, opp_index, g // 2)
            if g % 2 == 0:
                result, _ = play_game(candidate, opponent, seed=game_seed)
                score += {"gold": 1.0, "draw": 0.5, "scarlet": 0.0}[result.value]
            else:
                result, _ = play_game(opponent, candidate, seed=game_seed)
                score += {"scarlet": 1.0, "draw": 0.5, "gold": 0.0}[result.value]
            games += 1
    return score / games


def _fitness_task(args) -> float:
    theta, spec, seed = args
    return evaluate_fitness(theta, spec, seed)


@dataclass
class GenerationLog:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_ever: float
    sigma: float
    best_candidate: list[float]

    def as_dict(self) -> dict:
        return {
            "generation": self.generation,
            "best_fitness": self.best_fitness,
            "mean_fitness": self.mean_fitness,
            "best_ever": self.best_ever,
            "sigma": self.sigma,
            "best_candidate": self.best_candidate,
        }


@dataclass
class EvolutionResult:
    best_theta: np.ndarray
    best_fitness: float
    history: list[GenerationLog]
    state: CmaState


# --- checkpointing ----------------------------------------------------------------


def save_checkpoint(path, state: CmaState, rng: np.random.Generator, history, master_seed: int) -> None:
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "master_seed": master_seed,
        "state": {
            "mean": state.mean.tolist(),
            "sigma": state.sigma,
            "C": state.C.tolist(),
            "p_sigma": state.p_sigma.tolist(),
            "p_c": state.p_c.tolist(),
            "generation": state.generation,
            "lam": state.lam,
        },
        "rng_state": _jsonable(rng.bit_generator.state),
        "history": [entry.as_dict() for entry in history],
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def load_checkpoint(path) -> tuple[CmaState, np.random.Generator, list[GenerationLog], int]:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"checkpoint is not valid JSON: {exc}") from exc
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise DataError("not a dragonfish CMA-ES checkpoint")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise DataError(f"unsupported checkpoint version {payload.get('version')}")
    raw = payload["state"]
    state = init_state(np.array(raw["mean"]), sigma=raw["sigma"], lam=raw["lam"])
    state.C = np.array(raw["C"], dtype=np.float64)
    state.p_sigma = np.array(raw["p_sigma"], dtype=np.float64)
    state.p_c = np.array(raw["p_c"], dtype=np.float64)
    state.generation = int(raw["generation"])
    rng = np.random.default_rng()
    rng.bit_generator.state = payload["rng_state"]
    history = [GenerationLog(**entry) for entry in payload["history"]]
    return state, rng, history, int(payload["master_seed"])


def run_evolution(
    initial_theta=None,
    spec: FitnessSpec | None = None,
    generations: int = 10,
    seed: int = 0,
    lam: int | None = None,
    sigma: float = 0.3,
    checkpoint_path=None,
    jobs: int = 1,
    fitness_fn=None,
    progress=None,
) -> EvolutionResult:
    """ask -> evaluate -> tell for ``generations``, starting from the
    direct-transfer weights.

    Resumes from ``checkpoint_path`` if the file exists.  The returned best
    theta is picked among the per-generation best candidates by re-evaluating
    them on one fresh common seed block (fitness is noisy; a shared final seed
    makes the pick fair and deterministic).
    """
    if generations < 1:
        raise DomainError("need at least one generation")
    if fitness_fn is None and spec is None:
        raise DomainError("need a FitnessSpec (or an explicit fitness_fn)")

    def evaluate_all(thetas, gen_seed):
        if fitness_fn is not None:
            return [fitness_fn(theta, gen_seed) for theta in thetas]
        tasks = [(theta, spec, gen_seed) for theta in thetas]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                return list(pool.map(_fitness_task, tasks))
        return [_fitness_task(task) for task in tasks]

    start_theta = identity_theta() if initial_theta is None else np.asarray(initial_theta, float)
    history: list[GenerationLog] = []
    if checkpoint_path is not None and Path(checkpoint_path).exists():
        state, rng, history, saved_seed = load_checkpoint(checkpoint_path)
        if saved_seed != seed:
            raise DataError(
                f"checkpoint was created with seed {saved_seed}, not {seed}"
            )
    else:
        state = init_state(start_theta, sigma=sigma, lam=lam)
        rng = np.random.default_rng(seed)

    best_ever = history[-1].best_ever if history else -np.inf
    while state.generation < generations:
        gen_seed = derive_seed(seed, "generation", state.generation)
        candidates = ask(state, rng)
        fitnesses = evaluate_all(candidates, gen_seed)
        fit = np.asarray(fitnesses, dtype=np.float64)
        best_idx = int(np.argmax(np.where(np.isfinite(fit), fit, -np.inf)))
        best_ever = max(best_ever, float(fit[best_idx]))
        state = tell(state, candidates, fitnesses)
        history.append(
            GenerationLog(
                generation=state.generation,
                best_fitness=float(fit[best_idx]),
                mean_fitness=float(np.mean(fit[np.isfinite(fit)])) if np.isfinite(fit).any() else float("nan"),
                best_ever=best_ever,
                sigma=state.sigma,
                best_candidate=[float(v) for v in candidates[best_idx]],
            )
        )
        if progress is not None:
            progress(history[-1])
        if checkpoint_path is not None:
            save_checkpoint(checkpoint_path, state, rng, history, seed)

    # Final pick: re-evaluate each generation's best candidate on a common
    # fresh seed block; earliest generation wins ties.
    final_seed = derive_seed(seed, "final-selection")
    contenders = [np.array(entry.best_candidate) for entry in history]
    scores = evaluate_all(contenders, final_seed)
    pick = int(np.argmax(scores))
    return EvolutionResult(
        best_theta=contenders[pick],
        best_fitness=float(scores[pick]),
        history=history,
        state=state,
    )
