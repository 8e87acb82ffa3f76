"""Classical, Petz, sandwiched and measured Rényi divergences.

All values are in nats and live on the extended reals: ``math.inf`` is the
explicit infinite value and comparisons against it are exact.

Support conventions: for α >= 1 a support violation supp(ρ) ⊄ supp(σ) gives
+∞; for α < 1 the value is +∞ only when ρ and σ are orthogonal. Negative
powers are pseudo-inverse powers on the support (see ``opalg``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.special import logsumexp

from .config import OptimizerConfig
from .errors import DimensionError, DomainError, InputError, SupportError
from .opalg import (
    DensityOperator,
    Effect,
    OperatorLike,
    Pvm,
    as_matrix,
    commute,
    common_eigenbasis,
    eigh,
    frac_power,
    hermitian_part,
    kms_inner,
    largest_eigenvalue,
    log_on_support,
    nc_quotient,
    spectral_map,
    support_mask,
    support_projector,
    support_violation,
    weighted_norm,
)
from .optimize import pvm_search

PROB_TOL = 1e-10
PROB_CUTOFF = 1e-14
HOLDER_REL_TOL = 1e-12
# α in (0, 1): tests must be strictly positive; candidates are floored here
TEST_FLOOR = 1e-8
# Tr[ρT] below this counts as "T orthogonal to ρ"
ORTHOGONAL_TOL = 1e-14

KINDS = ("classical", "petz", "sandwiched", "measured")


# --------------------------------------------------------------------------- #
# Types
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class RenyiOrder:
    """Order α in (0, ∞]; α = 1 and α = ∞ are exact tags."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if math.isnan(v) or v <= 0:
            raise DomainError(f"Rényi order must be > 0, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, a: Union["RenyiOrder", float]) -> "RenyiOrder":
        return a if isinstance(a, RenyiOrder) else cls(a)

    @classmethod
    def one(cls) -> "RenyiOrder":
        return cls(1.0)

    @classmethod
    def infinity(cls) -> "RenyiOrder":
        return cls(math.inf)

    @property
    def is_one(self) -> bool:
        return self.value == 1.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)

    @property
    def conjugate(self) -> float:
        """α' = α/(α−1); ∞ at α = 1 and 1 at α = ∞."""
        if self.is_one:
            return math.inf
        if self.is_infinite:
            return 1.0
        return self.value / (self.value - 1.0)

    @property
    def exponent_weight(self) -> float:
        """(α−1)/α, the factor in front of every strong-converse exponent."""
        return 1.0 if self.is_infinite else (self.value - 1.0) / self.value

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return "inf" if self.is_infinite else repr(self.value)


@dataclass(frozen=True, eq=False)
class ProbDist:
    """Probability vector; entries down to -PROB_TOL are clipped to 0."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.size == 0:
            raise InputError("empty probability vector")
        if not np.all(np.isfinite(w)) or w.min() < -PROB_TOL:
            raise InputError("probabilities must be finite and nonnegative")
        if abs(w.sum() - 1.0) > PROB_TOL:
            raise InputError(f"probabilities sum to {w.sum()!r}, expected 1")
        w = np.clip(w, 0.0, None)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int) -> "ProbDist":
        return cls(np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class DivergenceResult:
    """One divergence value; ``finite`` is False exactly when value is +∞."""

    value: float
    alpha: float
    kind: str
    status: str = "exact"
    witness: Optional[Pvm] = None
    test: Optional[Effect] = None
    upper_bound: Optional[float] = None
    converged: bool = True

    @property
    def finite(self) -> bool:
        return not math.isinf(self.value)


class HolderReport(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    gap: float
    reverse: bool


DistLike = Union[ProbDist, Sequence[float], np.ndarray]
StateLike = Union[DensityOperator, OperatorLike]


def _dist(p: DistLike) -> np.ndarray:
    return p.weights if isinstance(p, ProbDist) else ProbDist(p).weights


def _state(x: StateLike) -> np.ndarray:
    return x.matrix if isinstance(x, DensityOperator) else DensityOperator(as_matrix(x)).matrix


def _pair(rho: StateLike, sigma: StateLike) -> Tuple[np.ndarray, np.ndarray]:
    r, s = _state(rho), _state(sigma)
    if r.shape != s.shape:
        raise DimensionError(f"dimension mismatch: {r.shape} vs {s.shape}")
    return r, s


def _effect(t: OperatorLike) -> np.ndarray:
    return t.matrix if isinstance(t, Effect) else Effect(as_matrix(t)).matrix


def _tr(m: np.ndarray) -> float:
    return float(np.trace(m).real)


def log_trace_power(m: np.ndarray, power: float) -> float:
    """log Tr[m^power] over the support of PSD *m*; -inf when m = 0."""
    w = scipy.linalg.eigvalsh(hermitian_part(m))
    w = w[support_mask(w)]
    if w.size == 0:
        return -math.inf
    return float(logsumexp(power * np.log(w)))


# --------------------------------------------------------------------------- #
# Classical
# --------------------------------------------------------------------------- #

def classical_value(p: np.ndarray, q: np.ndarray, alpha: float) -> float:
    """Unchecked classical Rényi divergence; the optimiser's inner loop."""
    sp = p > PROB_CUTOFF
    sq = q > PROB_CUTOFF
    violated = bool(np.any(sp & ~sq))
    if alpha >= 1.0 and violated:
        return math.inf
    if alpha == 1.0:
        return float(np.sum(p[sp] * (np.log(p[sp]) - np.log(q[sp]))))
    if math.isinf(alpha):
        return float(np.max(np.log(p[sp]) - np.log(q[sp])))
    both = sp & sq
    if not np.any(both):
        return math.inf
    log_s = logsumexp(alpha * np.log(p[both]) + (1.0 - alpha) * np.log(q[both]))
    return float(log_s / (alpha - 1.0))


def classical_renyi(p: DistLike, q: DistLike, a: Union[RenyiOrder, float]) -> float:
    """(1/(α−1)) log Σ p^α q^{1−α}, with the KL and max-ratio limits."""
    pw, qw = _dist(p), _dist(q)
    if pw.size != qw.size:
        raise DimensionError(f"length mismatch: {pw.size} vs {qw.size}")
    return classical_value(pw, qw, RenyiOrder.of(a).value)


# --------------------------------------------------------------------------- #
# Quantum families
# --------------------------------------------------------------------------- #

def von_neumann_entropy(rho: StateLike) -> float:
    w = scipy.linalg.eigvalsh(_state(rho))
    w = w[support_mask(w)]
    return float(-np.sum(w * np.log(w)))


def _relative_entropy(r: np.ndarray, s: np.ndarray) -> float:
    if support_violation(r, s):
        return math.inf
    return _tr(r @ (log_on_support(r) - log_on_support(s)))


def relative_entropy(rho: StateLike, sigma: StateLike) -> float:
    """Umegaki relative entropy Tr[ρ(log ρ − log σ)]."""
    return _relative_entropy(*_pair(rho, sigma))


def _sandwiched(r: np.ndarray, s: np.ndarray, alpha: float) -> float:
    if alpha == 1.0:
        return _relative_entropy(r, s)
    if math.isinf(alpha):
        q = nc_quotient(r, s)
        if q.support_violation:
            return math.inf
        return math.log(largest_eigenvalue(q.value))
    if alpha > 1.0 and support_violation(r, s):
        return math.inf
    g = frac_power(s, (1.0 - alpha) / (2.0 * alpha))
    log_q = log_trace_power(g @ r @ g, alpha)
    if math.isinf(log_q):
        return math.inf
    return log_q / (alpha - 1.0)


def sandwiched_renyi(rho: StateLike, sigma: StateLike, a: Union[RenyiOrder, float]) -> float:
    """D*_α(ρ‖σ) = (1/(α−1)) log Tr[(σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α].

    α = 1 is the Umegaki relative entropy, α = ∞ is log λ_max(ρ/σ).
    """
    r, s = _pair(rho, sigma)
    return _sandwiched(r, s, RenyiOrder.of(a).value)


def _petz(r: np.ndarray, s: np.ndarray, alpha: float) -> float:
    if alpha == 1.0:
        return _relative_entropy(r, s)
    if math.isinf(alpha):
        raise DomainError("the Petz divergence is only defined for finite orders")
    if alpha > 1.0 and support_violation(r, s):
        return math.inf
    q = _tr(frac_power(r, alpha) @ frac_power(s, 1.0 - alpha))
    if q <= 0:
        return math.inf
    return math.log(q) / (alpha - 1.0)


def petz_renyi(rho: StateLike, sigma: StateLike, a: Union[RenyiOrder, float]) -> float:
    """D_α(ρ‖σ) = (1/(α−1)) log Tr[ρ^α σ^{1−α}]."""
    r, s = _pair(rho, sigma)
    return _petz(r, s, RenyiOrder.of(a).value)


def measured_upper_bound(rho: StateLike, sigma: StateLike, a: Union[RenyiOrder, float]) -> float:
    """Bracket for D^M_α: D*_α for α >= 1/2, Petz D_α below."""
    r, s = _pair(rho, sigma)
    alpha = RenyiOrder.of(a).value
    return _sandwiched(r, s, alpha) if alpha >= 0.5 else _petz(r, s, alpha)


# --------------------------------------------------------------------------- #
# Variational objectives
# --------------------------------------------------------------------------- #

def _finite_order(a: Union[RenyiOrder, float], what: str) -> RenyiOrder:
    alpha = RenyiOrder.of(a)
    if alpha.is_one:
        raise DomainError(f"{what} is not defined at α = 1")
    return alpha


def _require_positive_test(t: np.ndarray) -> None:
    w = scipy.linalg.eigvalsh(t)
    if w[0] <= 0 or not support_mask(w).all():
        raise DomainError("this order needs a strictly positive test T > 0")


def variational_objective_measured(
    rho: StateLike, sigma: StateLike, a: Union[RenyiOrder, float], t: OperatorLike
) -> float:
    """(α/(α−1)) log Tr[ρT] − log Tr[σ T^{α/(α−1)}]."""
    r, s = _pair(rho, sigma)
    alpha = _finite_order(a, "the measured variational objective")
    tm = _effect(t)
    if alpha.value < 1:
        _require_positive_test(tm)
    e = alpha.conjugate
    pr = _tr(r @ tm)
    if pr <= ORTHOGONAL_TOL:
        return -math.inf
    second = _tr(s @ frac_power(tm, e))
    if second <= 0:
        return math.inf
    return e * math.log(pr) - math.log(second)


def variational_objective_sandwiched(
    rho: StateLike, sigma: StateLike, a: Union[RenyiOrder, float], t: OperatorLike
) -> float:
    """(α/(α−1)) log Tr[ρT] − log Tr[(T^{1/2} σ^{(α−1)/α} T^{1/2})^{α/(α−1)}]."""
    r, s = _pair(rho, sigma)
    alpha = _finite_order(a, "the sandwiched variational objective")
    tm = _effect(t)
    if alpha.value < 1:
        _require_positive_test(tm)
    e = alpha.conjugate
    pr = _tr(r @ tm)
    if pr <= ORTHOGONAL_TOL:
        return -math.inf
    half = frac_power(tm, 0.5)
    inner = half @ frac_power(s, 1.0 / e) @ half
    log_second = log_trace_power(inner, e)
    if math.isinf(log_second):
        return math.inf
    return e * math.log(pr) - log_second


def optimal_sandwiched_test(rho: StateLike, sigma: StateLike, a: Union[RenyiOrder, float]) -> Effect:
    """Test saturating the sandwiched variational expression for 1 < α < ∞.

    T ∝ σ^{-1/2α'} |σ^{-1/2α'} ρ σ^{-1/2α'}|^{α−1} σ^{-1/2α'}, scaled to λ_max = 1.
    """
    r, s = _pair(rho, sigma)
    alpha = RenyiOrder.of(a)
    if alpha.is_infinite or alpha.value <= 1:
        raise DomainError("the optimal sandwiched test needs a finite order α > 1")
    if support_violation(r, s):
        raise SupportError("supp(rho) is not contained in supp(sigma); D* is infinite")
    g = frac_power(s, -0.5 / alpha.conjugate)
    t = g @ frac_power(g @ r @ g, alpha.value - 1.0) @ g
    return Effect(hermitian_part(t) / largest_eigenvalue(t))


def umegaki_variational_objective(rho: StateLike, sigma: StateLike, t: OperatorLike) -> float:
    """Tr[ρ log T] − log Tr exp(log σ + log T); needs full-rank σ and T."""
    r, s = _pair(rho, sigma)
    tm = _effect(t)
    _require_positive_test(tm)
    if not support_mask(scipy.linalg.eigvalsh(s)).all():
        raise DomainError("the Umegaki variational objective needs a full-rank sigma")
    log_t = log_on_support(tm)
    w = scipy.linalg.eigvalsh(hermitian_part(log_on_support(s) + log_t))
    return _tr(r @ log_t) - float(logsumexp(w))


def optimal_umegaki_test(rho: StateLike, sigma: StateLike) -> Effect:
    """exp(log ρ − log σ) scaled to λ_max = 1 (full-rank ρ and σ)."""
    r, s = _pair(rho, sigma)
    for m, name in ((r, "rho"), (s, "sigma")):
        if not support_mask(scipy.linalg.eigvalsh(m)).all():
            raise DomainError(f"the optimal Umegaki test needs a full-rank {name}")
    h = log_on_support(r) - log_on_support(s)
    return Effect(spectral_map(h - largest_eigenvalue(h) * np.eye(h.shape[0]), np.exp, psd=False))


def measured_alpha1_objective(rho: StateLike, sigma: StateLike, t: OperatorLike) -> float:
    """Tr[ρ log T] − log Tr[σT] for T > 0."""
    r, s = _pair(rho, sigma)
    tm = _effect(t)
    _require_positive_test(tm)
    return _tr(r @ log_on_support(tm)) - math.log(_tr(s @ tm))


def petz_variational_objective(
    rho: StateLike, sigma: StateLike, a: Union[RenyiOrder, float], t: OperatorLike
) -> float:
    """(α/(α−1)) log Tr[(T^{α/2} ρ^α T^{α/2})^{1/α}] − log Tr[(T^{α/2} σ^{α−1} T^{α/2})^{1/(α−1)}]."""
    r, s = _pair(rho, sigma)
    alpha = RenyiOrder.of(a)
    if alpha.is_infinite or alpha.value <= 1:
        raise DomainError("the Petz variational objective needs a finite order α > 1")
    av = alpha.value
    tm = _effect(t)
    th = frac_power(tm, av / 2.0)
    log_first = log_trace_power(th @ frac_power(r, av) @ th, 1.0 / av)
    if log_first == -math.inf or math.exp(log_first) <= ORTHOGONAL_TOL:
        raise DomainError("the test is orthogonal to rho")
    log_second = log_trace_power(th @ frac_power(s, av - 1.0) @ th, 1.0 / (av - 1.0))
    if math.isinf(log_second):
        return math.inf
    return alpha.conjugate * log_first - log_second


# --------------------------------------------------------------------------- #
# Hölder
# --------------------------------------------------------------------------- #

def holder_check(
    x: OperatorLike, y: OperatorLike, sigma: OperatorLike, a: Union[RenyiOrder, float]
) -> HolderReport:
    """⟨x, y⟩_σ against ‖x‖_{α,σ}‖y‖_{α',σ}.

    Forward (≤) for α >= 1, reverse (≥) for α in (0, 1), where the reverse
    direction needs supp(σ) ⊆ supp(y).
    """
    xm, ym, sm = as_matrix(x), as_matrix(y), as_matrix(sigma)
    alpha = RenyiOrder.of(a)
    reverse = alpha.value < 1
    if reverse and support_violation(sm, ym):
        raise DomainError("reverse Hölder needs supp(sigma) ⊆ supp(y)")
    lhs = kms_inner(xm, ym, sm)
    rhs = weighted_norm(xm, sm, alpha.value) * weighted_norm(ym, sm, alpha.conjugate)
    tol = HOLDER_REL_TOL * max(abs(lhs), abs(rhs), 1.0)
    gap = lhs - rhs if reverse else rhs - lhs
    return HolderReport(lhs=lhs, rhs=rhs, holds=gap >= -tol, gap=gap, reverse=reverse)


def holder_equality_witness(x: OperatorLike, sigma: OperatorLike, a: Union[RenyiOrder, float]) -> np.ndarray:
    """y = σ^{-1/2α'} |σ^{1/2α} x σ^{1/2α}|^{α−1} σ^{-1/2α'}, which attains equality."""
    xm, sm = as_matrix(x), as_matrix(sigma)
    alpha = RenyiOrder.of(a)
    if alpha.is_infinite or alpha.value <= 1:
        raise DomainError("the Hölder equality witness needs a finite order α > 1")
    if not support_mask(scipy.linalg.eigvalsh(hermitian_part(sm))).all():
        raise DomainError("the Hölder equality witness needs a full-rank sigma")
    if not np.any(np.abs(xm) > 0):
        raise DomainError("x must be nonzero")
    inner = frac_power(sm, 0.5 / alpha.value)
    m = inner @ xm @ inner
    outer = frac_power(sm, -0.5 / alpha.conjugate)
    mag = spectral_map(m, lambda w: np.abs(w) ** (alpha.value - 1.0), psd=False)
    return hermitian_part(outer @ mag @ outer)


# --------------------------------------------------------------------------- #
# Measured divergence
# --------------------------------------------------------------------------- #

def outcome_distributions(rho: StateLike, sigma: StateLike, pvm: Pvm) -> Tuple[ProbDist, ProbDist]:
    """Outcome distributions (p_{ρ,Π}, q_{σ,Π}) of a PVM."""
    r, s = _pair(rho, sigma)
    p, q = pvm.probabilities(r), pvm.probabilities(s)
    return ProbDist(p / p.sum()), ProbDist(q / q.sum())


def saturating_weights(p: np.ndarray, q: np.ndarray, alpha: float) -> np.ndarray:
    """Scalar test weights t = (p/q)^{α−1} (normalised to max 1) for one PVM."""
    on = (p > PROB_CUTOFF) & (q > PROB_CUTOFF)
    t = np.zeros_like(p)
    if math.isinf(alpha):
        ratio = np.full_like(p, -math.inf)
        ratio[on] = np.log(p[on]) - np.log(q[on])
        t[ratio >= ratio.max() - 1e-12] = 1.0
    else:
        power = 1.0 if alpha == 1.0 else alpha - 1.0
        logs = np.full_like(p, -math.inf)
        logs[on] = power * (np.log(p[on]) - np.log(q[on]))
        if alpha > 1.0:
            logs[(p > PROB_CUTOFF) & ~on] = math.inf
        top = logs[np.isfinite(logs)].max() if np.isfinite(logs).any() else 0.0
        if np.isposinf(logs).any():
            t[np.isposinf(logs)] = 1.0
        else:
            t = np.exp(logs - top)
    if alpha <= 1.0:
        t = np.maximum(t, TEST_FLOOR)
    return np.clip(t, 0.0, 1.0)


def measured_saturating_test(
    rho: StateLike, sigma: StateLike, pvm: Pvm, a: Union[RenyiOrder, float]
) -> Effect:
    """T = Σ t_i P_i turning the measured objective into the PVM's classical value."""
    r, s = _pair(rho, sigma)
    alpha = RenyiOrder.of(a).value
    t = saturating_weights(pvm.probabilities(r), pvm.probabilities(s), alpha)
    return Effect(sum(ti * pi for ti, pi in zip(t, pvm.projectors)))


def quantized_test(t: OperatorLike, levels: int) -> Effect:
    """Spectral staircase Σ_i (i/n) E_[i/n, (i+1)/n); within 1/n of T in norm."""
    if levels < 1:
        raise DomainError("levels must be >= 1")
    tm = _effect(t)
    return Effect(spectral_map(tm, lambda w: np.clip(np.floor(w * levels) / levels, 0.0, 1.0), psd=False))


def _binary_pvm(projector: np.ndarray) -> Pvm:
    eye = np.eye(projector.shape[0])
    parts = [m for m in (projector, eye - projector) if np.trace(m).real > 0.5]
    return Pvm(tuple(parts))


def measured_search(
    r: np.ndarray,
    s: np.ndarray,
    alpha: float,
    cfg: OptimizerConfig,
    starts: Sequence[np.ndarray] = (),
    restarts: Optional[int] = None,
) -> Tuple[float, np.ndarray, str, bool]:
    """(value, basis, status, converged) for validated matrices; no witnesses.

    Shared by ``measured_renyi`` and the nested σ_B search in cqcoding.
    """
    if commute(r, s):
        u = common_eigenbasis(r, s)
        p = np.clip(np.einsum("ik,ij,jk->k", u.conj(), r, u).real, 0.0, None)
        q = np.clip(np.einsum("ik,ij,jk->k", u.conj(), s, u).real, 0.0, None)
        return classical_value(p, q, alpha), u, "exact", True
    deterministic = list(starts)
    for m in (r, s, r + math.pi * s, r - s):
        deterministic.append(eigh(m)[1])
    if alpha > 1.0 and math.isfinite(alpha) and not support_violation(r, s):
        g = frac_power(s, (1.0 - alpha) / (2.0 * alpha))
        deterministic.append(eigh(g @ frac_power(g @ r @ g, alpha - 1.0) @ g)[1])
    found = pvm_search(
        r, s, lambda p, q: classical_value(p, q, alpha), cfg, starts=deterministic, restarts=restarts
    )
    return max(found.value, 0.0), found.basis, "lower_bound", found.converged


def measured_renyi(
    rho: StateLike,
    sigma: StateLike,
    a: Union[RenyiOrder, float],
    cfg: Optional[OptimizerConfig] = None,
) -> DivergenceResult:
    """Certified lower bound on D^M_α by search over rank-1 PVMs.

    Exact (status ``exact``) for commuting pairs and for infinite values;
    otherwise status ``lower_bound`` with ``upper_bound`` carrying the
    D*/Petz bracket.
    """
    r, s = _pair(rho, sigma)
    alpha = RenyiOrder.of(a).value
    cfg = cfg or OptimizerConfig()
    upper = measured_upper_bound(r, s, alpha)

    if alpha >= 1.0 and support_violation(r, s):
        pvm = _binary_pvm(support_projector(s))
        return DivergenceResult(math.inf, alpha, "measured", "exact", witness=pvm, upper_bound=upper)
    if alpha < 1.0 and math.isinf(upper):
        pvm = _binary_pvm(support_projector(r))
        return DivergenceResult(math.inf, alpha, "measured", "exact", witness=pvm, upper_bound=upper)

    value, basis, status, converged = measured_search(r, s, alpha, cfg)
    pvm = Pvm.from_basis(basis)
    t = saturating_weights(pvm.probabilities(r), pvm.probabilities(s), alpha)
    test = Effect(sum(ti * pi for ti, pi in zip(t, pvm.projectors)))
    return DivergenceResult(
        value=value,
        alpha=alpha,
        kind="measured",
        status=status,
        witness=pvm,
        test=test,
        upper_bound=upper,
        converged=converged,
    )


def divergence(
    rho: StateLike,
    sigma: StateLike,
    a: Union[RenyiOrder, float],
    kind: str,
    cfg: Optional[OptimizerConfig] = None,
) -> DivergenceResult:
    """Evaluate one of ``KINDS``; ``classical`` compares the diagonals."""
    alpha = RenyiOrder.of(a).value
    if kind == "measured":
        return measured_renyi(rho, sigma, alpha, cfg)
    r, s = _pair(rho, sigma)
    if kind == "classical":
        p = np.clip(np.diag(r).real, 0.0, None)
        q = np.clip(np.diag(s).real, 0.0, None)
        return DivergenceResult(classical_value(p / p.sum(), q / q.sum(), alpha), alpha, kind)
    if kind == "petz":
        return DivergenceResult(_petz(r, s, alpha), alpha, kind)
    if kind == "sandwiched":
        test = None
        if alpha > 1.0 and math.isfinite(alpha) and not support_violation(r, s):
            test = optimal_sandwiched_test(r, s, alpha)
        return DivergenceResult(_sandwiched(r, s, alpha), alpha, kind, test=test)
    raise InputError(f"unknown divergence kind {kind!r}; expected one of {', '.join(KINDS)}")
