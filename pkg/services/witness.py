# services/witness.py
"""
Randomized search for a pair of inputs whose system-level distance grows
under one step of a dilation.

Search space:
- correlated=False: product inputs σ_i ⊗ env_init with pure σ_i. The
  reduced step is then a CPTP map, so growth can never exceed roundoff.
- correlated=True: pure joint inputs on the full register.

Optimizer: multi-restart coordinate hill climbing. Each restart r owns a
generator seeded with seed + r, so restarts are independent and the
result does not depend on how they are scheduled.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.errors import DimensionMismatch
from core.matkernel import adjoint
from models.channel import UnitaryDilation
from models.report import WitnessConfig, WitnessResult
from models.state import DensityMatrix
from services.channels import apply_kraus, dilation_to_kraus
from services.divisibility import trace_distance_arrays
from services.states import compose, reduce_pure_system

logger = logging.getLogger("divisi.witness")

Objective = Callable[[np.ndarray], tuple[float, float]]


@dataclass(frozen=True)
class _RestartOutcome:
    restart: int
    growth: float
    d_in: float
    d_out: float
    params: np.ndarray
    evaluations: int


# ---------------------------------------------------------------------
# Parameterization: x ∈ R^{4n} ↔ two complex n-vectors
# ---------------------------------------------------------------------
def _split_params(x: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    v1 = x[0:n] + 1j * x[n : 2 * n]
    v2 = x[2 * n : 3 * n] + 1j * x[3 * n : 4 * n]
    return v1, v2


def _join_kets(k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    return np.concatenate([k1.real, k1.imag, k2.real, k2.imag])


def _normalized(v: np.ndarray) -> np.ndarray | None:
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        return None
    return v / norm


def _correlated_objective(d: UnitaryDilation) -> tuple[Objective, int]:
    u = np.asarray(d.u)
    split = d.split
    n = u.shape[0]

    def evaluate(x: np.ndarray) -> tuple[float, float]:
        v1, v2 = (_normalized(v) for v in _split_params(x, n))
        if v1 is None or v2 is None:
            return np.nan, np.nan
        d_in = trace_distance_arrays(reduce_pure_system(v1, split), reduce_pure_system(v2, split))
        d_out = trace_distance_arrays(reduce_pure_system(u @ v1, split), reduce_pure_system(u @ v2, split))
        return d_in, d_out

    return evaluate, n


def _product_objective(d: UnitaryDilation) -> tuple[Objective, int]:
    ops = dilation_to_kraus(d).ops
    n = d.split.dim_system

    def evaluate(x: np.ndarray) -> tuple[float, float]:
        v1, v2 = (_normalized(v) for v in _split_params(x, n))
        if v1 is None or v2 is None:
            return np.nan, np.nan
        p1 = np.outer(v1, v1.conj())
        p2 = np.outer(v2, v2.conj())
        d_in = trace_distance_arrays(p1, p2)
        d_out = trace_distance_arrays(apply_kraus(ops, p1), apply_kraus(ops, p2))
        return d_in, d_out

    return evaluate, n


# ---------------------------------------------------------------------
# One restart slot
# ---------------------------------------------------------------------
def _climb(
    evaluate: Objective,
    n: int,
    cfg: WitnessConfig,
    restart: int,
    start: np.ndarray | None,
) -> _RestartOutcome:
    rng = np.random.default_rng(cfg.seed + restart)
    size = 4 * n

    def score(x: np.ndarray) -> tuple[float, float, float]:
        d_in, d_out = evaluate(x)
        growth = d_out - d_in
        if not np.isfinite(growth):
            return -np.inf, d_in, d_out
        return growth, d_in, d_out

    current = start.copy() if start is not None else rng.standard_normal(size)
    cur_growth, cur_in, cur_out = score(current)
    best = (cur_growth, cur_in, cur_out, current)
    evaluations = 1
    step = cfg.step
    failures = 0

    for _ in range(cfg.iters):
        candidate = current.copy()
        candidate[rng.integers(size)] += step * rng.standard_normal()
        growth, d_in, d_out = score(candidate)
        evaluations += 1

        if growth > cur_growth:
            current, cur_growth, cur_in, cur_out = candidate, growth, d_in, d_out
            failures = 0
            step = min(2.0 * step, cfg.step)
            if cur_growth > best[0]:
                best = (cur_growth, cur_in, cur_out, current)
        else:
            failures += 1
            step = max(0.5 * step, cfg.min_step)

        if failures >= cfg.patience:
            current = rng.standard_normal(size)
            cur_growth, cur_in, cur_out = score(current)
            evaluations += 1
            step = cfg.step
            failures = 0
            if cur_growth > best[0]:
                best = (cur_growth, cur_in, cur_out, current)

    growth, d_in, d_out, params = best
    logger.debug(f"[WITNESS] restart={restart} growth={growth:.9f} evaluations={evaluations}")
    return _RestartOutcome(restart, growth, d_in, d_out, params, evaluations)


# ---------------------------------------------------------------------
# Public operation
# ---------------------------------------------------------------------
def _initial_params(cfg: WitnessConfig, n: int) -> np.ndarray | None:
    if cfg.initial_pair is None:
        return None
    k1, k2 = cfg.initial_pair
    if k1.dim != n or k2.dim != n:
        what = "joint register" if cfg.correlated else "system"
        raise DimensionMismatch(
            f"initial pair has dimension {k1.dim}/{k2.dim}, the {what} has {n}",
            (k1.dim,),
            (n,),
        )
    return _join_kets(np.asarray(k1.amps), np.asarray(k2.amps))


def _pair_states(d: UnitaryDilation, params: np.ndarray, n: int, correlated: bool) -> tuple[DensityMatrix, DensityMatrix]:
    kets = [v / np.linalg.norm(v) for v in _split_params(params, n)]
    if correlated:
        return tuple(
            DensityMatrix(qubits=d.n_qubits, mat=np.outer(k, k.conj())) for k in kets
        )
    sys_qubits = len(d.split.system_qubits)
    return tuple(
        compose(
            DensityMatrix(qubits=sys_qubits, mat=k.reshape(-1, 1) @ adjoint(k.reshape(-1, 1))),
            d.env_init,
            d.split,
        )
        for k in kets
    )


def witness_search(d: UnitaryDilation, cfg: WitnessConfig) -> WitnessResult:
    """
    Best pair found for d_sys_out − d_sys_in. Deterministic given cfg.seed;
    ties between restarts go to the lowest restart index.
    """
    if cfg.correlated:
        evaluate, n = _correlated_objective(d)
    else:
        evaluate, n = _product_objective(d)
    start = _initial_params(cfg, n)

    def run(restart: int) -> _RestartOutcome:
        return _climb(evaluate, n, cfg, restart, start if restart == 0 else None)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(run, range(cfg.restarts)))
    else:
        outcomes = [run(r) for r in range(cfg.restarts)]

    winner = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.growth > winner.growth:
            winner = outcome

    logger.info(
        f"[WITNESS] correlated={cfg.correlated} seed={cfg.seed} restarts={cfg.restarts} "
        f"best_restart={winner.restart} growth={winner.growth:.9f}"
    )
    return WitnessResult(
        pair=_pair_states(d, winner.params, n, cfg.correlated),
        growth=winner.growth,
        d_sys_in=winner.d_in,
        d_sys_out=winner.d_out,
        iterations=sum(o.evaluations for o in outcomes),
        seed=cfg.seed,
        restart=winner.restart,
        correlated=cfg.correlated,
    )
