"""Optimisation engines shared by divergences, hypotest and cqcoding.

Three engines, all deterministic given ``OptimizerConfig.seed``:

* ``pvm_search``: maximise a score of the outcome distributions of a rank-1
  PVM over the unitary group (BFGS on an exponential chart, central
  differences, restarts merged by max).
* ``mirror_descent_density``: entropic mirror descent over density matrices
  of full rank on a fixed support.
* ``mirror_ascent_simplex``: the same update on the probability simplex.

The engines know nothing about Rényi divergences; callers hand in the score or
value/gradient oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import minimize, minimize_scalar
from scipy.special import logsumexp

from .config import OptimizerConfig
from .utils import as_rng, note, parallel_map, random_unitary

Score = Callable[[np.ndarray, np.ndarray], float]
DensityOracle = Callable[[np.ndarray], Tuple[float, np.ndarray]]
SimplexOracle = Callable[[np.ndarray], Tuple[float, np.ndarray]]

# stand-in for an infinite score inside BFGS, which cannot line-search through inf
_SCORE_CAP = 1e12
_MIN_STEP = 1e-12
_EIG_FLOOR = 1e-300


# --------------------------------------------------------------------------- #
# PVM search
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class PvmSearch:
    value: float
    basis: np.ndarray
    converged: bool
    starts: int


def _chart(dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """Strict upper-triangle indices; diagonal phases do not move rank-1 projectors."""
    return np.triu_indices(dim, k=1)


def _generator(theta: np.ndarray, dim: int, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    m = len(rows)
    g = np.zeros((dim, dim), dtype=complex)
    g[rows, cols] = theta[:m] + 1j * theta[m:]
    return g + g.conj().T


def _outcomes(u: np.ndarray, rho: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = np.einsum("ik,ij,jk->k", u.conj(), rho, u).real
    q = np.einsum("ik,ij,jk->k", u.conj(), sigma, u).real
    return np.clip(p, 0.0, None), np.clip(q, 0.0, None)


def _climb(
    rho: np.ndarray,
    sigma: np.ndarray,
    score: Score,
    u0: np.ndarray,
    cfg: OptimizerConfig,
) -> Tuple[float, np.ndarray, bool]:
    dim = rho.shape[0]
    rows, cols = _chart(dim)
    n_params = 2 * len(rows)

    def basis(theta: np.ndarray) -> np.ndarray:
        return u0 @ scipy.linalg.expm(1j * _generator(theta, dim, rows, cols))

    def loss(theta: np.ndarray) -> float:
        v = score(*_outcomes(basis(theta), rho, sigma))
        return -v if math.isfinite(v) else -_SCORE_CAP

    def grad(theta: np.ndarray) -> np.ndarray:
        h = cfg.fd_step
        out = np.empty(n_params)
        for k in range(n_params):
            e = np.zeros(n_params)
            e[k] = h
            out[k] = (loss(theta + e) - loss(theta - e)) / (2 * h)
        return out

    if n_params == 0:
        return score(*_outcomes(u0, rho, sigma)), u0, True

    history: List[float] = []
    stalled = [False]

    def watch(theta: np.ndarray) -> None:
        history.append(loss(theta))
        if len(history) > cfg.stall_iters:
            if history[-cfg.stall_iters - 1] - history[-1] < cfg.stall_tol:
                stalled[0] = True
                raise StopIteration

    res = minimize(
        loss,
        np.zeros(n_params),
        jac=grad,
        method="BFGS",
        callback=watch,
        options={"maxiter": cfg.max_iter, "gtol": 1e-10},
    )
    u = basis(res.x)
    # BFGS reports precision loss (status 2) when it sits on the optimum
    converged = bool(res.success or stalled[0] or res.status == 2)
    return score(*_outcomes(u, rho, sigma)), u, converged


def pvm_search(
    rho: np.ndarray,
    sigma: np.ndarray,
    score: Score,
    cfg: OptimizerConfig,
    starts: Sequence[np.ndarray] = (),
    restarts: Optional[int] = None,
) -> PvmSearch:
    """Maximise ``score(p, q)`` over orthonormal bases of the common space.

    *starts* are deterministic initial bases (columns orthonormal); *restarts*
    Haar-random bases are appended from the ``cfg.seed`` stream.
    """
    dim = rho.shape[0]
    rng = as_rng(cfg.seed)
    n_random = cfg.restarts if restarts is None else restarts
    initial = [np.asarray(u, dtype=complex) for u in starts]
    initial += [random_unitary(dim, rng) for _ in range(n_random)]
    if not initial:
        initial = [np.eye(dim, dtype=complex)]

    runs = parallel_map(lambda u0: _climb(rho, sigma, score, u0, cfg), initial, workers=cfg.workers)
    best = max(range(len(runs)), key=lambda i: runs[i][0])
    value, u, converged = runs[best]
    if not converged:
        note("pvm-search", f"best of {len(runs)} starts did not converge (value {value:.6g})")
    return PvmSearch(value=value, basis=u, converged=converged, starts=len(runs))


# --------------------------------------------------------------------------- #
# Mirror descent over density matrices
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class DescentResult:
    point: np.ndarray
    value: float
    gradient: np.ndarray
    iterations: int
    converged: bool


def _normalised_log(h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(exp(h)/Tr exp(h), log of that) computed from one eigendecomposition."""
    w, v = scipy.linalg.eigh((h + h.conj().T) / 2)
    w = w - logsumexp(w)
    point = (v * np.exp(w)) @ v.conj().T
    return (point + point.conj().T) / 2, (v * w) @ v.conj().T


def mirror_descent_density(
    oracle: DensityOracle,
    start: np.ndarray,
    cfg: OptimizerConfig,
    component: str = "mirror-descent",
) -> DescentResult:
    """Minimise over full-rank density matrices: σ ← exp(log σ − η∇)/Tr.

    The step starts at 1.0 every iteration and is halved until the value does
    not increase. Stops when the relative improvement drops below
    ``cfg.md_tol`` or no step below ``_MIN_STEP`` helps.
    """
    w, v = scipy.linalg.eigh(start)
    log_point = (v * np.log(np.clip(w, _EIG_FLOOR, None))) @ v.conj().T
    point, log_point = _normalised_log(log_point)
    value, grad = oracle(point)
    for it in range(1, cfg.md_max_iter + 1):
        eta = 1.0
        while True:
            trial, log_trial = _normalised_log(log_point - eta * grad)
            t_value, t_grad = oracle(trial)
            if t_value <= value:
                break
            eta /= 2.0
            if eta < _MIN_STEP:
                return DescentResult(point, value, grad, it, True)
        gain = value - t_value
        point, log_point, value, grad = trial, log_trial, t_value, t_grad
        if gain <= cfg.md_tol * max(1.0, abs(value)):
            return DescentResult(point, value, grad, it, True)
    note(component, f"no convergence after {cfg.md_max_iter} iterations (value {value:.6g})")
    return DescentResult(point, value, grad, cfg.md_max_iter, False)


# --------------------------------------------------------------------------- #
# Mirror ascent over the simplex
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class AscentResult:
    point: np.ndarray
    value: float
    iterations: int
    converged: bool


def mirror_ascent_simplex(
    oracle: SimplexOracle,
    start: np.ndarray,
    cfg: OptimizerConfig,
    component: str = "mirror-ascent",
) -> AscentResult:
    """Maximise over the open simplex: p ← p·exp(η g)/Z with halving steps."""
    log_p = np.log(np.clip(np.asarray(start, dtype=float), _EIG_FLOOR, None))
    log_p -= logsumexp(log_p)
    p = np.exp(log_p)
    value, grad = oracle(p)
    for it in range(1, cfg.max_iter + 1):
        eta = 1.0
        while True:
            trial_log = log_p + eta * grad
            trial_log -= logsumexp(trial_log)
            trial = np.exp(trial_log)
            t_value, t_grad = oracle(trial)
            if t_value >= value:
                break
            eta /= 2.0
            if eta < _MIN_STEP:
                return AscentResult(p, value, it, True)
        gain = t_value - value
        log_p, p, value, grad = trial_log, trial, t_value, t_grad
        if gain <= cfg.md_tol * max(1.0, abs(value)):
            return AscentResult(p, value, it, True)
    note(component, f"no convergence after {cfg.max_iter} iterations (value {value:.6g})")
    return AscentResult(p, value, cfg.max_iter, False)


# --------------------------------------------------------------------------- #
# One-dimensional refinement
# --------------------------------------------------------------------------- #

def refine_bounded(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    iterations: int,
) -> Tuple[float, float]:
    """Maximise *f* on [lo, hi] with bounded Brent/golden-section search.

    Returns ``(x, f(x))``; callers keep their own grid maximum alongside.
    """
    if not hi > lo:
        return lo, f(lo)
    res = minimize_scalar(
        lambda x: -f(x),
        bounds=(lo, hi),
        method="bounded",
        options={"maxiter": iterations, "xatol": 1e-10},
    )
    return float(res.x), float(-res.fun)
