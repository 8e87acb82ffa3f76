"""One-shot strong-converse bounds and exponents for binary hypothesis testing.

Null hypothesis ρ, alternative σ, test T: type-I success Tr[ρT], type-II error
Tr[σT]. The one-shot bound

    Tr[ρT] <= exp(−((α−1)/α)(−log Tr[σT] − D_α(ρ‖σ)))    for every α >= 1

is evaluated with D_α = D*_α, which dominates the measured divergence, so the
reported bound is always valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import (
    DEFAULT_ALPHA_GRID,
    DEFAULT_GOLDEN_ITERS,
    DENSE_DIM_BUDGET,
    MEASURED_NFOLD_DIM_BUDGET,
    OptimizerConfig,
)
from .divergences import (
    ORTHOGONAL_TOL,
    RenyiOrder,
    StateLike,
    _pair,
    _sandwiched,
    classical_value,
    measured_search,
)
from .errors import BudgetError, DomainError, InputError
from .opalg import (
    Effect,
    OperatorLike,
    as_matrix,
    commute,
    common_eigenbasis,
    kron,
    kron_power,
    nonnegative_projector,
    support_violation,
)
from .optimize import refine_bounded
from .utils import note, parallel_map

OUTCOME_TOL = 1e-12


@dataclass(frozen=True)
class TestOutcome:
    """(Tr[ρT], Tr[σT]) for one test, tagged with the copy count and threshold."""

    type1_success: float
    type2_error: float
    n: int = 1
    mu: float = 0.0

    def __post_init__(self) -> None:
        for name in ("type1_success", "type2_error"):
            v = float(getattr(self, name))
            if not -OUTCOME_TOL <= v <= 1.0 + OUTCOME_TOL:
                raise InputError(f"{name} = {v!r} is not a probability")
            object.__setattr__(self, name, min(max(v, 0.0), 1.0))


@dataclass(frozen=True)
class CurvePoint:
    rate: float
    exponent: float
    alpha_star: float


@dataclass(frozen=True)
class ExponentCurve:
    """Sampled exponent curve; ``finite`` is False when every value is +∞."""

    points: Tuple[CurvePoint, ...]
    finite: bool = True

    @property
    def rates(self) -> List[float]:
        return [pt.rate for pt in self.points]

    @property
    def exponents(self) -> List[float]:
        return [pt.exponent for pt in self.points]


@dataclass(frozen=True)
class ScBound:
    bound: float
    argmax_alpha: float
    status: str = "exact"


def _alphas(alphas: Sequence[float], need_one: bool = False) -> Tuple[float, ...]:
    grid = tuple(float(a) for a in alphas)
    if not grid or any(a < 1.0 for a in grid):
        raise DomainError("strong-converse α grids need values >= 1")
    if need_one and 1.0 not in grid:
        raise DomainError("the α grid must contain α = 1")
    return grid


def _weight(alpha: float) -> float:
    return RenyiOrder(alpha).exponent_weight


def _commuting_divergences(r: np.ndarray, s: np.ndarray, grid: Sequence[float]) -> Dict[float, float]:
    u = common_eigenbasis(r, s)
    p = np.clip(np.einsum("ik,ij,jk->k", u.conj(), r, u).real, 0.0, None)
    q = np.clip(np.einsum("ik,ij,jk->k", u.conj(), s, u).real, 0.0, None)
    return {a: classical_value(p, q, a) for a in grid}


def _bound_from(divs: Dict[float, float], log_type2: float) -> Tuple[float, float]:
    """min over α of exp(−w_α(−log Tr[σT] − D_α)); infinite D_α terms are skipped."""
    best, best_alpha = 1.0, 1.0
    for a, d in divs.items():
        w = _weight(a)
        if w == 0.0 or math.isinf(d):
            continue
        exponent = w * (-log_type2 - d)
        value = math.exp(-exponent) if exponent != math.inf else 0.0
        if value < best:
            best, best_alpha = value, a
    return best, best_alpha


def _test_overlaps(r: np.ndarray, s: np.ndarray, t: OperatorLike) -> Tuple[float, float]:
    tm = t.matrix if isinstance(t, Effect) else Effect(as_matrix(t)).matrix
    type1 = float(np.trace(r @ tm).real)
    if type1 <= ORTHOGONAL_TOL:
        raise DomainError("the test is orthogonal to rho")
    type2 = max(float(np.trace(s @ tm).real), 0.0)
    return type1, type2


def sc_bound(
    rho: StateLike,
    sigma: StateLike,
    t: OperatorLike,
    alphas: Sequence[float] = DEFAULT_ALPHA_GRID,
) -> ScBound:
    """Smallest one-shot strong-converse bound on Tr[ρT] over the α grid."""
    r, s = _pair(rho, sigma)
    grid = _alphas(alphas, need_one=True)
    _, type2 = _test_overlaps(r, s, t)
    if commute(r, s):
        divs = _commuting_divergences(r, s, grid)
    else:
        divs = {a: _sandwiched(r, s, a) for a in grid}
    log_type2 = math.log(type2) if type2 > 0 else -math.inf
    bound, alpha = _bound_from(divs, log_type2)
    return ScBound(bound=bound, argmax_alpha=alpha)


def sc_bound_measured(
    rho: StateLike,
    sigma: StateLike,
    t: OperatorLike,
    alphas: Sequence[float] = DEFAULT_ALPHA_GRID,
    cfg: Optional[OptimizerConfig] = None,
) -> ScBound:
    """The same bound with the measured divergence plugged in.

    Only lower bounds on D^M are available for noncommuting pairs, so such a
    result is tagged ``heuristic``; commuting pairs are exact.
    """
    r, s = _pair(rho, sigma)
    grid = _alphas(alphas, need_one=True)
    cfg = cfg or OptimizerConfig()
    _, type2 = _test_overlaps(r, s, t)
    exact = commute(r, s)
    if exact:
        divs = _commuting_divergences(r, s, grid)
    elif support_violation(r, s):
        divs = {a: math.inf for a in grid}
    else:
        divs = dict(zip(grid, parallel_map(lambda a: measured_search(r, s, a, cfg)[0], grid, cfg.workers)))
    log_type2 = math.log(type2) if type2 > 0 else -math.inf
    bound, alpha = _bound_from(divs, log_type2)
    return ScBound(bound=bound, argmax_alpha=alpha, status="exact" if exact else "heuristic")


# --------------------------------------------------------------------------- #
# Exponent curves
# --------------------------------------------------------------------------- #

def _alpha_of(u: float) -> float:
    """Inverse of u = (α−1)/α on [0, 1]."""
    return math.inf if u >= 1.0 else 1.0 / (1.0 - u)


def exponent_curve_from(
    divergence_at: Callable[[float], float],
    rates: Sequence[float],
    alphas: Sequence[float],
    refine: bool = True,
    iterations: int = DEFAULT_GOLDEN_ITERS,
) -> ExponentCurve:
    """sup_α ((α−1)/α)(r − D_α) for every rate, given D_α as a function of α.

    The grid maximum is kept; with *refine* a bounded scalar search in
    u = (α−1)/α between the neighbours of the grid argmax may improve it.
    Values are floored at 0 (the α → 1 term).
    """
    grid = sorted(set(_alphas(alphas)))
    cache: Dict[float, float] = {}

    def d(a: float) -> float:
        if a not in cache:
            cache[a] = divergence_at(a)
        return cache[a]

    us = [_weight(a) for a in grid]
    for a in grid:
        d(a)

    points: List[CurvePoint] = []
    for r in rates:
        r = float(r)
        values = [u * (r - d(a)) if math.isfinite(d(a)) else -math.inf for a, u in zip(grid, us)]
        k = int(np.argmax(values))
        best, best_alpha = values[k], grid[k]
        if refine and len(grid) > 1 and math.isfinite(best):
            lo = us[max(k - 1, 0)]
            hi = us[min(k + 1, len(grid) - 1)]
            u_star, v_star = refine_bounded(lambda u: u * (r - divergence_at(_alpha_of(u))), lo, hi, iterations)
            if v_star > best:
                best, best_alpha = v_star, _alpha_of(u_star)
        if best <= 0.0:
            best, best_alpha = 0.0, 1.0
        points.append(CurvePoint(rate=r, exponent=best, alpha_star=best_alpha))
    return ExponentCurve(points=tuple(points))


def sc_exponent_curve(
    rho: StateLike,
    sigma: StateLike,
    rates: Sequence[float],
    alphas: Sequence[float] = DEFAULT_ALPHA_GRID,
    refine: bool = True,
) -> ExponentCurve:
    """Hypothesis-testing strong-converse exponent sup_{α>=1} ((α−1)/α)(r − D*_α)."""
    r, s = _pair(rho, sigma)
    if support_violation(r, s):
        pts = tuple(CurvePoint(float(x), math.inf, math.inf) for x in rates)
        return ExponentCurve(points=pts, finite=False)
    if commute(r, s):
        u = common_eigenbasis(r, s)
        p = np.clip(np.einsum("ik,ij,jk->k", u.conj(), r, u).real, 0.0, None)
        q = np.clip(np.einsum("ik,ij,jk->k", u.conj(), s, u).real, 0.0, None)
        return exponent_curve_from(lambda a: classical_value(p, q, a), rates, alphas, refine)
    return exponent_curve_from(lambda a: _sandwiched(r, s, a), rates, alphas, refine)


def threshold_rate(curve: ExponentCurve, tol: float = 1e-9) -> Optional[float]:
    """Largest sampled rate whose exponent is still <= tol (None if none is)."""
    zero = [pt.rate for pt in curve.points if pt.exponent <= tol]
    return max(zero) if zero else None


# --------------------------------------------------------------------------- #
# Neyman–Pearson tests and n-fold trade-offs
# --------------------------------------------------------------------------- #

def neyman_pearson_test(rho: StateLike, sigma: StateLike, mu: float) -> Effect:
    """Projector onto the nonnegative eigenspace of ρ − μσ."""
    if not mu >= 0:
        raise DomainError(f"Neyman–Pearson threshold must be >= 0, got {mu!r}")
    r, s = _pair(rho, sigma)
    return Effect(nonnegative_projector(r - mu * s))


def _check_budget(dim: int, n: int, budget: int) -> None:
    if dim ** n > budget:
        raise BudgetError(f"{n} copies of a {dim}-dimensional state exceed the dense budget ({dim ** n} > {budget})")


def nfold_tradeoff(
    rho: StateLike,
    sigma: StateLike,
    n: int,
    mus: Sequence[float],
    workers: int = 1,
) -> List[TestOutcome]:
    """Neyman–Pearson trade-off points on ρ^{⊗n} vs σ^{⊗n}."""
    if not 1 <= n <= 6:
        raise DomainError("n must be between 1 and 6")
    r, s = _pair(rho, sigma)
    _check_budget(r.shape[0], n, DENSE_DIM_BUDGET)
    rn, sn = kron_power(r, n), kron_power(s, n)

    def point(mu: float) -> TestOutcome:
        t = nonnegative_projector(rn - float(mu) * sn)
        return TestOutcome(
            type1_success=float(np.trace(rn @ t).real),
            type2_error=float(np.trace(sn @ t).real),
            n=n,
            mu=float(mu),
        )

    for mu in mus:
        if not mu >= 0:
            raise DomainError(f"Neyman–Pearson threshold must be >= 0, got {mu!r}")
    return parallel_map(point, list(mus), workers=workers)


def tradeoff_exponents(outcomes: Sequence[TestOutcome]) -> List[Tuple[float, float]]:
    """Per-copy (−(1/n) log Tr[σT], −(1/n) log Tr[ρT]) for each outcome."""
    out = []
    for o in outcomes:
        rate = -math.log(o.type2_error) / o.n if o.type2_error > 0 else math.inf
        err = -math.log(o.type1_success) / o.n if o.type1_success > 0 else math.inf
        out.append((rate, err))
    return out


def regularized_measured_sequence(
    rho: StateLike,
    sigma: StateLike,
    a: Union[RenyiOrder, float],
    n_max: int,
    cfg: Optional[OptimizerConfig] = None,
) -> List[float]:
    """Per-copy measured lower bounds (1/n) D^M_α(ρ^{⊗n}‖σ^{⊗n}) for n = 1..n_max.

    Each n starts from the product of the single-copy optimal basis as well as
    from the usual deterministic and Haar starts.
    """
    if not 1 <= n_max <= 3:
        raise DomainError("n_max must be between 1 and 3")
    r, s = _pair(rho, sigma)
    _check_budget(r.shape[0], n_max, MEASURED_NFOLD_DIM_BUDGET)
    alpha = RenyiOrder.of(a).value
    cfg = cfg or OptimizerConfig()
    if alpha >= 1.0 and support_violation(r, s):
        return [math.inf] * n_max

    values: List[float] = []
    single_basis: Optional[np.ndarray] = None
    for n in range(1, n_max + 1):
        rn, sn = kron_power(r, n), kron_power(s, n)
        starts = [] if single_basis is None else [kron(*([single_basis] * n))]
        value, basis, status, converged = measured_search(rn, sn, alpha, cfg, starts=starts)
        if n == 1:
            single_basis = basis
        if not converged:
            note("pvm-search", f"n = {n} copies: optimiser did not converge ({status})")
        values.append(value / n)
    return values


def nfold_consistency(
    rho: StateLike,
    sigma: StateLike,
    outcomes: Sequence[TestOutcome],
    alphas: Sequence[float] = DEFAULT_ALPHA_GRID,
) -> List[Tuple[float, float, float]]:
    """(rate, observed error exponent, single-copy exponent bound) per outcome.

    Points with Tr[σT] = 0 carry no rate and are skipped.
    """
    pairs = [(r, e) for r, e in tradeoff_exponents(outcomes) if math.isfinite(r)]
    if not pairs:
        return []
    curve = sc_exponent_curve(rho, sigma, [r for r, _ in pairs], alphas)
    return [(r, e, pt.exponent) for (r, e), pt in zip(pairs, curve.points)]
