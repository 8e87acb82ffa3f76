"""Classical-quantum channel coding: Rényi information, capacities, decoders.

A c-q channel maps input letter x to an output state ρ_x on B. With input
distribution p the joint state ρ_XB = Σ_x p(x)|x⟩⟨x| ⊗ ρ_x is block diagonal,
so every divergence against ρ_X ⊗ σ_B splits into per-letter terms:

    Q_α(ρ_XB ‖ ρ_X ⊗ σ) = Σ_x p(x) Q_α(ρ_x ‖ σ).

The Rényi information minimises over σ_B; the capacity then maximises over p.
Both directions use the engines in ``optimize``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import cvxpy as cp
import numpy as np
import scipy.linalg
from scipy.special import logsumexp

from .config import (
    DEFAULT_ALPHA_GRID,
    DENSE_DIM_BUDGET,
    MEASURED_JOINT_DIM_BUDGET,
    RANDOM_CODE_BUDGET,
    OptimizerConfig,
)
from .divergences import (
    PROB_CUTOFF,
    ProbDist,
    RenyiOrder,
    _relative_entropy,
    _sandwiched,
    measured_search,
    von_neumann_entropy,
)
from .errors import BudgetError, DimensionError, DomainError, InputError
from .hypotest import ExponentCurve, exponent_curve_from
from .opalg import (
    DensityOperator,
    OperatorLike,
    Povm,
    as_matrix,
    frac_power,
    hermitian_part,
    kron,
    nonnegative_projector,
    partial_trace,
    support_mask,
    support_projector,
    trace_norm,
)
from .optimize import mirror_ascent_simplex, mirror_descent_density
from .utils import as_rng, note, parallel_map

BLOCK_TOL = 1e-12
MARGINAL_TOL = 1e-10
IDENTITY_TOL = 1e-10
DIVERGENCE_IDENTITY_TOL = 1e-8
# σ eigenvalues are floored here inside the gradient oracle
_SIGMA_FLOOR = 1e-200


# --------------------------------------------------------------------------- #
# Types
# --------------------------------------------------------------------------- #

@dataclass(frozen=True, eq=False)
class CqChannel:
    """Finite map x ↦ ρ_x from input letters to states on a common space B."""

    outputs: Tuple[DensityOperator, ...]

    def __post_init__(self) -> None:
        outs = tuple(o if isinstance(o, DensityOperator) else DensityOperator(as_matrix(o)) for o in self.outputs)
        if not outs:
            raise InputError("a channel needs at least one input letter")
        if len({o.dim for o in outs}) != 1:
            raise DimensionError("channel outputs have different dimensions")
        object.__setattr__(self, "outputs", outs)

    @property
    def input_alphabet_size(self) -> int:
        return len(self.outputs)

    @property
    def d_B(self) -> int:
        return self.outputs[0].dim

    def matrices(self) -> List[np.ndarray]:
        return [o.matrix for o in self.outputs]

    def average(self, p: "InputLike") -> np.ndarray:
        w = _weights(p, self.input_alphabet_size)
        return sum(wx * m for wx, m in zip(w, self.matrices()))


@dataclass(frozen=True, eq=False)
class InputDistribution:
    p: ProbDist

    @classmethod
    def uniform(cls, n: int) -> "InputDistribution":
        return cls(ProbDist.uniform(n))

    @classmethod
    def of(cls, x: "InputLike") -> "InputDistribution":
        if isinstance(x, InputDistribution):
            return x
        return cls(x if isinstance(x, ProbDist) else ProbDist(x))

    @property
    def weights(self) -> np.ndarray:
        return self.p.weights


InputLike = Union[InputDistribution, ProbDist, Sequence[float], np.ndarray]


def _weights(p: InputLike, n: int) -> np.ndarray:
    w = InputDistribution.of(p).weights
    if w.size != n:
        raise DimensionError(f"input distribution has {w.size} entries, channel has {n} letters")
    return w


@dataclass(frozen=True)
class Codebook:
    """Codeword x(m) for each message m = 0 .. |M|−1."""

    codewords: Tuple[int, ...]

    def __post_init__(self) -> None:
        words = tuple(int(x) for x in self.codewords)
        if not words:
            raise InputError("a codebook needs at least one message")
        if min(words) < 0:
            raise InputError("codewords must be letter indices >= 0")
        object.__setattr__(self, "codewords", words)

    @property
    def message_count(self) -> int:
        return len(self.codewords)

    def check(self, ch: CqChannel) -> None:
        if max(self.codewords) >= ch.input_alphabet_size:
            raise InputError(
                f"codeword {max(self.codewords)} is not a letter of a {ch.input_alphabet_size}-letter channel"
            )

    def induced_distribution(self, n_letters: int) -> InputDistribution:
        """Input distribution of x(m) for a uniformly random message."""
        counts = np.bincount(self.codewords, minlength=n_letters).astype(float)
        return InputDistribution(ProbDist(counts / counts.sum()))


@dataclass(frozen=True, eq=False)
class SharedRandomnessCode:
    """Codebooks x_k(m) drawn with probability w_k, the draw known to both ends.

    A single deterministic codebook is the one-element family. ``iid`` builds
    the random code whose codewords are independent draws from p_X.
    """

    codebooks: Tuple[Codebook, ...]
    weights: ProbDist

    def __post_init__(self) -> None:
        books = tuple(b if isinstance(b, Codebook) else Codebook(tuple(b)) for b in self.codebooks)
        if not books:
            raise InputError("a shared-randomness code needs at least one codebook")
        if len({b.message_count for b in books}) != 1:
            raise InputError("codebooks of a shared-randomness code must share the message count")
        w = self.weights if isinstance(self.weights, ProbDist) else ProbDist(self.weights)
        if len(w) != len(books):
            raise DimensionError(f"{len(w)} weights for {len(books)} codebooks")
        object.__setattr__(self, "codebooks", books)
        object.__setattr__(self, "weights", w)

    @classmethod
    def deterministic(cls, codebook: Codebook) -> "SharedRandomnessCode":
        return cls((codebook,), ProbDist([1.0]))

    @classmethod
    def iid(cls, p: "InputLike", message_count: int) -> "SharedRandomnessCode":
        """Every codeword tuple over supp(p), weighted by Π_m p(x(m))."""
        if message_count < 1:
            raise InputError("message count must be >= 1")
        w = InputDistribution.of(p).weights
        letters = [x for x in range(w.size) if w[x] > PROB_CUTOFF]
        count = len(letters) ** message_count
        if count > RANDOM_CODE_BUDGET:
            raise BudgetError(f"{count} codebooks exceed the random-code budget {RANDOM_CODE_BUDGET}")
        words = list(itertools.product(letters, repeat=message_count))
        probs = np.array([math.prod(w[x] for x in word) for word in words])
        return cls(tuple(Codebook(word) for word in words), ProbDist(probs / probs.sum()))

    @property
    def message_count(self) -> int:
        return self.codebooks[0].message_count

    def check(self, ch: CqChannel) -> None:
        for b in self.codebooks:
            b.check(ch)

    def conditional(self, n_letters: int) -> np.ndarray:
        """q[m, x] = Σ_k w_k [x_k(m) = x], the letter law of message m."""
        q = np.zeros((self.message_count, n_letters))
        for wk, b in zip(self.weights.weights, self.codebooks):
            q[np.arange(self.message_count), b.codewords] += wk
        return q

    def induced_distribution(self, n_letters: int) -> InputDistribution:
        """Input distribution of the transmitted letter for a uniformly random message."""
        q = self.conditional(n_letters)
        return InputDistribution(ProbDist(q.mean(axis=0)))


CodeLike = Union[Codebook, SharedRandomnessCode]
DecoderLike = Union[Povm, Sequence[Povm], Callable[[Codebook], Povm]]


def _as_code(code: CodeLike) -> SharedRandomnessCode:
    return code if isinstance(code, SharedRandomnessCode) else SharedRandomnessCode.deterministic(code)


@dataclass(frozen=True, eq=False)
class JointState:
    """ρ_XB = Σ_x p(x)|x⟩⟨x| ⊗ ρ_x with its classical marginal."""

    rho_XB: DensityOperator
    d_X: int
    d_B: int
    p: ProbDist

    def __post_init__(self) -> None:
        m = self.rho_XB.matrix
        if m.shape[0] != self.d_X * self.d_B:
            raise DimensionError("joint state size does not match d_X * d_B")
        blocks = m.reshape(self.d_X, self.d_B, self.d_X, self.d_B)
        for x in range(self.d_X):
            for y in range(self.d_X):
                if x != y and np.abs(blocks[x, :, y, :]).max() > BLOCK_TOL:
                    raise InputError("joint state has off-diagonal X blocks")
        marginal = partial_trace(m, (self.d_X, self.d_B), keep=0)
        if np.abs(marginal - np.diag(self.p.weights)).max() > MARGINAL_TOL:
            raise InputError("joint state marginal does not match p")

    @property
    def rho_X(self) -> np.ndarray:
        return np.diag(self.p.weights).astype(complex)


class MutualInfo(NamedTuple):
    value: float
    sigma_star: np.ndarray
    kind: str
    status: str
    converged: bool
    letter_divergences: Tuple[float, ...]


class Capacity(NamedTuple):
    value: float
    p_star: np.ndarray
    sigma_star: np.ndarray
    kind: str
    status: str
    converged: bool


class Radius(NamedTuple):
    value: float
    sigma: np.ndarray


class DirectSumReport(NamedTuple):
    success_probability: float
    trace_omega_t: float
    trace_product_t: float
    inverse_message_count: float
    divergence_omega: float
    divergence_joint: float
    alpha: float
    holds: bool


# --------------------------------------------------------------------------- #
# Joint state and channel constructions
# --------------------------------------------------------------------------- #

def joint_state(ch: CqChannel, p: InputLike) -> JointState:
    """Block-diagonal ρ_XB with blocks p(x)·ρ_x."""
    w = _weights(p, ch.input_alphabet_size)
    m = scipy.linalg.block_diag(*[wx * o for wx, o in zip(w, ch.matrices())])
    return JointState(DensityOperator(m), ch.input_alphabet_size, ch.d_B, ProbDist(w))


def product_channel(ch: CqChannel, n: int) -> CqChannel:
    """n-fold product channel: letters are tuples, outputs are Kronecker products."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if ch.d_B ** n > DENSE_DIM_BUDGET:
        raise BudgetError(f"output dimension {ch.d_B ** n} exceeds the dense budget {DENSE_DIM_BUDGET}")
    mats = ch.matrices()
    outs = [kron(*(mats[i] for i in word)) for word in itertools.product(range(len(mats)), repeat=n)]
    return CqChannel(tuple(DensityOperator(hermitian_part(o)) for o in outs))


def holevo_information(ch: CqChannel, p: InputLike) -> float:
    """S(Σ p ρ_x) − Σ p S(ρ_x)."""
    w = _weights(p, ch.input_alphabet_size)
    avg = ch.average(w)
    return von_neumann_entropy(DensityOperator(hermitian_part(avg))) - sum(
        wx * von_neumann_entropy(o) for wx, o in zip(w, ch.outputs) if wx > 0
    )


# --------------------------------------------------------------------------- #
# Order-∞ radius (semidefinite program)
# --------------------------------------------------------------------------- #

def _max_divergence(outputs: Sequence[np.ndarray], sigma: np.ndarray) -> float:
    return max(_sandwiched(r, sigma, math.inf) for r in outputs)


def _radius(outputs: Sequence[np.ndarray]) -> Radius:
    d = outputs[0].shape[0]
    s = cp.Variable((d, d), hermitian=True)
    problem = cp.Problem(cp.Minimize(cp.real(cp.trace(s))), [s - r >> 0 for r in outputs])
    solver = cp.CLARABEL if "CLARABEL" in cp.installed_solvers() else None
    candidates = [hermitian_part(sum(outputs) / len(outputs))]
    try:
        problem.solve(solver=solver)
    except cp.error.SolverError as exc:
        note("radius", f"SDP solver failed ({exc}); using the average output")
    if s.value is not None:
        w, v = scipy.linalg.eigh(hermitian_part(np.asarray(s.value)))
        sdp = (v * np.clip(w, 0.0, None)) @ v.conj().T
        if np.trace(sdp).real > 0:
            candidates.append(hermitian_part(sdp / np.trace(sdp).real))
    scored = [(_max_divergence(outputs, c), c) for c in candidates]
    value, sigma = min(scored, key=lambda vc: vc[0])
    return Radius(value, sigma)


def max_renyi_radius(ch: CqChannel, letters: Optional[Sequence[int]] = None) -> Radius:
    """log min{Tr S : S >= ρ_x for all x}, attained at σ = S / Tr S.

    The SDP solution is re-evaluated exactly, so the value is the order-∞
    divergence radius at an explicit σ.
    """
    mats = ch.matrices()
    chosen = [mats[i] for i in (letters if letters is not None else range(len(mats)))]
    if not chosen:
        raise InputError("no letters selected")
    return _radius(chosen)


# --------------------------------------------------------------------------- #
# Rényi information
# --------------------------------------------------------------------------- #

def _divided_differences(lam: np.ndarray, gamma: float) -> np.ndarray:
    """First divided differences of λ ↦ λ^γ on the spectrum *lam*."""
    phi = lam ** gamma
    diff = lam[:, None] - lam[None, :]
    close = np.abs(diff) <= 1e-10 * lam.max()
    mid = (lam[:, None] + lam[None, :]) / 2.0
    safe = np.where(close, 1.0, diff)
    return np.where(close, gamma * mid ** (gamma - 1.0), (phi[:, None] - phi[None, :]) / safe)


def _sandwiched_oracle(roots: Sequence[np.ndarray], log_p: np.ndarray, alpha: float):
    """Value and gradient of σ ↦ (1/(α−1)) log Σ_x p(x) Q*_α(ρ_x‖σ) on a full-rank support."""
    gamma = (1.0 - alpha) / alpha

    def oracle(sigma: np.ndarray) -> Tuple[float, np.ndarray]:
        lam, u = scipy.linalg.eigh(sigma)
        lam = np.clip(lam, _SIGMA_FLOOR, None)
        a = (u * lam ** gamma) @ u.conj().T
        log_q = np.empty(len(roots))
        scaled = []
        for i, root in enumerate(roots):
            wh, vh = scipy.linalg.eigh(hermitian_part(root @ a @ root))
            keep = support_mask(wh)
            lw = np.log(wh[keep])
            log_q[i] = logsumexp(alpha * lw)
            vk = vh[:, keep]
            scaled.append(root @ ((vk * np.exp((alpha - 1.0) * lw - log_q[i])) @ vk.conj().T) @ root)
        total = logsumexp(log_p + log_q)
        weights = np.exp(log_p + log_q - total)
        m = sum(wx * mx for wx, mx in zip(weights, scaled))
        grad = (alpha / (alpha - 1.0)) * u @ (_divided_differences(lam, gamma) * (u.conj().T @ m @ u)) @ u.conj().T
        return float(total / (alpha - 1.0)), hermitian_part(grad)

    return oracle


def _q_gradient(p: np.ndarray, q: np.ndarray, alpha: float) -> np.ndarray:
    """∂D_α(p‖q)/∂q for the classical divergence, zero off the support of q."""
    on = (q > PROB_CUTOFF) & (p > PROB_CUTOFF)
    g = np.zeros_like(q)
    if not on.any():
        return g
    if alpha == 1.0:
        g[on] = -p[on] / q[on]
    elif math.isinf(alpha):
        ratio = np.full_like(p, -math.inf)
        ratio[on] = np.log(p[on]) - np.log(q[on])
        k = int(np.argmax(ratio))
        g[k] = -1.0 / q[k]
    else:
        logs = alpha * np.log(p[on]) + (1.0 - alpha) * np.log(q[on])
        log_s = logsumexp(logs)
        g[on] = -np.exp(alpha * np.log(p[on]) - alpha * np.log(q[on]) - log_s)
    return g


def _combine(divs: np.ndarray, log_p: np.ndarray, alpha: float) -> Tuple[float, np.ndarray]:
    """(1/(α−1)) log Σ p e^{(α−1)D_x} and its weights ∂/∂D_x."""
    if alpha == 1.0:
        return float(np.dot(np.exp(log_p), divs)), np.exp(log_p)
    if math.isinf(alpha):
        k = int(np.argmax(divs))
        w = np.zeros_like(divs)
        w[k] = 1.0
        return float(divs[k]), w
    logs = log_p + (alpha - 1.0) * divs
    total = logsumexp(logs)
    return float(total / (alpha - 1.0)), np.exp(logs - total)


def _measured_oracle(outputs: Sequence[np.ndarray], basis: np.ndarray, log_p: np.ndarray, alpha: float, cfg: OptimizerConfig):
    """Nested oracle: per-letter PVM search, gradient by the envelope theorem."""
    warm: Dict[int, np.ndarray] = {}

    def oracle(sigma_k: np.ndarray) -> Tuple[float, np.ndarray]:
        sigma = hermitian_part(basis @ sigma_k @ basis.conj().T)
        divs = np.empty(len(outputs))
        grads = []
        for i, r in enumerate(outputs):
            starts = [warm[i]] if i in warm else []
            value, u, _, _ = measured_search(r, sigma, alpha, cfg, starts=starts, restarts=cfg.inner_restarts)
            warm[i] = u
            divs[i] = value
            p = np.clip(np.einsum("ik,ij,jk->k", u.conj(), r, u).real, 0.0, None)
            q = np.clip(np.einsum("ik,ij,jk->k", u.conj(), sigma, u).real, 0.0, None)
            g = (u * _q_gradient(p, q, alpha)) @ u.conj().T
            grads.append(basis.conj().T @ g @ basis)
        value, weights = _combine(divs, log_p, alpha)
        return value, hermitian_part(sum(wx * g for wx, g in zip(weights, grads)))

    return oracle


def _support_basis(avg: np.ndarray) -> np.ndarray:
    w, v = scipy.linalg.eigh(hermitian_part(avg))
    return v[:, support_mask(w)]


def _compress(sigma: np.ndarray, basis: np.ndarray) -> np.ndarray:
    s = hermitian_part(basis.conj().T @ sigma @ basis)
    w, v = scipy.linalg.eigh(s)
    if w.min() <= 0:
        return np.eye(basis.shape[1]) / basis.shape[1]
    return s / np.trace(s).real


def _information(
    outputs: Sequence[np.ndarray],
    p: np.ndarray,
    alpha: float,
    kind: str,
    cfg: OptimizerConfig,
    start: Optional[np.ndarray] = None,
) -> MutualInfo:
    """Rényi information for raw outputs and a raw probability vector."""
    active = [i for i in range(len(outputs)) if p[i] > 0]
    act_out = [outputs[i] for i in active]
    log_p = np.log(p[active])
    avg = hermitian_part(sum(p[i] * outputs[i] for i in active))

    def finish(value: float, sigma: np.ndarray, status: str, converged: bool) -> MutualInfo:
        if kind == "sandwiched":
            divs = tuple(_sandwiched(r, sigma, alpha) for r in outputs)
        else:
            divs = tuple(_letter_measured(outputs, sigma, alpha, cfg))
        return MutualInfo(value, sigma, kind, status, converged, divs)

    if kind == "sandwiched":
        if alpha == 1.0:
            value = float(sum(np.exp(lp) * _relative_entropy(r, avg) for lp, r in zip(log_p, act_out)))
            return finish(value, avg, "exact", True)
        if math.isinf(alpha):
            radius = _radius(act_out)
            return finish(radius.value, radius.sigma, "exact", True)
        basis = _support_basis(avg)
        roots = [frac_power(basis.conj().T @ r @ basis, 0.5) for r in act_out]
        s0 = _compress(start if start is not None else avg, basis)
        res = mirror_descent_density(_sandwiched_oracle(roots, log_p, alpha), s0, cfg)
        sigma = hermitian_part(basis @ res.point @ basis.conj().T)
        return finish(res.value, sigma, "optimized", res.converged)

    if kind != "measured":
        raise InputError(f"unknown information kind {kind!r}; expected measured or sandwiched")
    d_x, d_b = len(outputs), outputs[0].shape[0]
    if d_x * d_b > MEASURED_JOINT_DIM_BUDGET:
        raise BudgetError(
            f"measured Rényi information needs d_X * d_B <= {MEASURED_JOINT_DIM_BUDGET}, got {d_x * d_b}"
        )
    seed_info = start if start is not None else _information(outputs, p, alpha, "sandwiched", cfg).sigma_star
    basis = _support_basis(avg)
    s0 = _compress(seed_info, basis)
    res = mirror_descent_density(_measured_oracle(act_out, basis, log_p, alpha, cfg), s0, cfg)
    sigma = hermitian_part(basis @ res.point @ basis.conj().T)
    return finish(res.value, sigma, "lower_bound", res.converged)


def _letter_measured(outputs: Sequence[np.ndarray], sigma: np.ndarray, alpha: float, cfg: OptimizerConfig) -> List[float]:
    return [measured_search(r, sigma, alpha, cfg, restarts=cfg.inner_restarts)[0] for r in outputs]


def renyi_mutual_info(
    ch: CqChannel,
    p: InputLike,
    a: Union[RenyiOrder, float],
    kind: str = "sandwiched",
    cfg: Optional[OptimizerConfig] = None,
) -> MutualInfo:
    """I_α(X:B) = inf_σ D_α(ρ_XB ‖ ρ_X ⊗ σ) for the chosen divergence kind.

    sandwiched: closed form at α = 1 (Holevo, σ* = average output), SDP at
    α = ∞, mirror descent otherwise. measured: nested PVM search started from
    the sandwiched minimiser; status ``lower_bound``.
    """
    alpha = RenyiOrder.of(a).value
    if kind == "sandwiched" and alpha < 0.5:
        raise DomainError("sandwiched Rényi information needs α >= 1/2")
    w = _weights(p, ch.input_alphabet_size)
    w = np.where(w > PROB_CUTOFF, w, 0.0)
    return _information(ch.matrices(), w / w.sum(), alpha, kind, cfg or OptimizerConfig())


# --------------------------------------------------------------------------- #
# Capacity
# --------------------------------------------------------------------------- #

def _letter_gradient(divs: Sequence[float], p: np.ndarray, alpha: float) -> np.ndarray:
    d = np.nan_to_num(np.asarray(divs, dtype=float), posinf=1e6)
    if alpha == 1.0:
        return d
    logs = np.log(p) + (alpha - 1.0) * d
    return np.exp((alpha - 1.0) * d - logsumexp(logs)) / (alpha - 1.0)


def _capacity_starts(n: int, cfg: OptimizerConfig) -> List[np.ndarray]:
    starts = [np.full(n, 1.0 / n)]
    for x in range(n):
        if len(starts) >= cfg.capacity_restarts:
            break
        v = np.full(n, 0.1 / n)
        v[x] += 0.9
        starts.append(v)
    rng = as_rng(cfg.seed)
    while len(starts) < cfg.capacity_restarts:
        starts.append(rng.dirichlet(np.ones(n)))
    return starts


def renyi_capacity(
    ch: CqChannel,
    a: Union[RenyiOrder, float],
    kind: str = "sandwiched",
    cfg: Optional[OptimizerConfig] = None,
) -> Capacity:
    """C_α = sup_p I_α(X:B) by mirror ascent over the input simplex (α >= 1).

    Values are capped at log|X|, which bounds every Rényi capacity.
    """
    alpha = RenyiOrder.of(a).value
    if alpha < 1.0:
        raise DomainError("Rényi capacities are computed for α >= 1")
    cfg = cfg or OptimizerConfig()
    outputs = ch.matrices()
    n = len(outputs)
    cap = math.log(n)

    if n == 1 or math.isinf(alpha):
        # the order-∞ information does not depend on p beyond its support
        p = np.full(n, 1.0 / n)
        info = _information(outputs, p, alpha, kind, cfg)
        return Capacity(min(info.value, cap), p, info.sigma_star, kind, info.status, info.converged)

    def ascend(p0: np.ndarray):
        last: Dict[str, np.ndarray] = {}

        def oracle(p: np.ndarray) -> Tuple[float, np.ndarray]:
            info = _information(outputs, p, alpha, kind, cfg, start=last.get("sigma"))
            last["sigma"] = info.sigma_star
            return info.value, _letter_gradient(info.letter_divergences, p, alpha)

        return mirror_ascent_simplex(oracle, p0, cfg)

    runs = parallel_map(ascend, _capacity_starts(n, cfg), workers=cfg.workers)
    best = max(runs, key=lambda r: r.value)
    info = _information(outputs, best.point, alpha, kind, cfg)
    return Capacity(min(info.value, cap), best.point, info.sigma_star, kind, info.status, best.converged)


# --------------------------------------------------------------------------- #
# Converse bound and exponent
# --------------------------------------------------------------------------- #

def _grid(alphas: Union[float, RenyiOrder, Sequence[float]]) -> Tuple[float, ...]:
    if isinstance(alphas, (int, float, RenyiOrder)):
        alphas = (float(alphas),)
    grid = tuple(float(a) for a in alphas)
    if not grid or min(grid) < 1.0:
        raise DomainError("coding bounds need α >= 1")
    return grid


def coding_upper_bound(
    ch: CqChannel,
    p: InputLike,
    message_count: int,
    alphas: Union[float, RenyiOrder, Sequence[float]] = DEFAULT_ALPHA_GRID,
    kind: str = "sandwiched",
    cfg: Optional[OptimizerConfig] = None,
) -> float:
    """min over α of exp(−((α−1)/α)(log|M| − I_α(X:B))), clamped at 1."""
    if message_count < 1:
        raise DomainError("message_count must be >= 1")
    grid = _grid(alphas)
    if message_count == 1:
        return 1.0
    cfg = cfg or OptimizerConfig()
    best = 1.0
    for a in grid:
        w = RenyiOrder(a).exponent_weight
        if w == 0.0:
            continue
        info = renyi_mutual_info(ch, p, a, kind, cfg)
        if math.isinf(info.value):
            continue
        best = min(best, math.exp(-w * (math.log(message_count) - info.value)))
    return min(best, 1.0)


def coding_exponent_curve(
    ch: CqChannel,
    rates: Sequence[float],
    alphas: Sequence[float] = DEFAULT_ALPHA_GRID,
    cfg: Optional[OptimizerConfig] = None,
) -> ExponentCurve:
    """sup over the α grid of ((α−1)/α)(R − C*_α), floored at 0."""
    grid = _grid(alphas)
    cfg = cfg or OptimizerConfig()
    capacities = {a: renyi_capacity(ch, a, "sandwiched", cfg).value for a in sorted(set(grid))}
    return exponent_curve_from(lambda a: capacities[a], rates, grid, refine=False)


# --------------------------------------------------------------------------- #
# Decoders
# --------------------------------------------------------------------------- #

def _priors(codebook: Codebook, priors: Optional[Sequence[float]]) -> np.ndarray:
    if priors is None:
        return np.full(codebook.message_count, 1.0 / codebook.message_count)
    w = ProbDist(priors).weights
    if w.size != codebook.message_count:
        raise DimensionError("one prior per message is required")
    return w


def helstrom_decoder(ch: CqChannel, codebook: Codebook, priors: Optional[Sequence[float]] = None) -> Povm:
    """Optimal two-message POVM {T, 1 − T}, T onto the positive part of p₀ρ₀ − p₁ρ₁."""
    if codebook.message_count != 2:
        raise DomainError("the Helstrom decoder needs exactly two messages")
    codebook.check(ch)
    w = _priors(codebook, priors)
    mats = ch.matrices()
    t = nonnegative_projector(w[0] * mats[codebook.codewords[0]] - w[1] * mats[codebook.codewords[1]])
    return Povm((t, np.eye(ch.d_B) - t))


def helstrom_success(ch: CqChannel, codebook: Codebook, priors: Optional[Sequence[float]] = None) -> float:
    """½(1 + ‖p₀ρ₀ − p₁ρ₁‖₁)."""
    if codebook.message_count != 2:
        raise DomainError("Helstrom success needs exactly two messages")
    codebook.check(ch)
    w = _priors(codebook, priors)
    mats = ch.matrices()
    return 0.5 * (1.0 + trace_norm(w[0] * mats[codebook.codewords[0]] - w[1] * mats[codebook.codewords[1]]))


def pgm_decoder(ch: CqChannel, codebook: Codebook, priors: Optional[Sequence[float]] = None) -> Povm:
    """Square-root measurement E_m = S^{-1/2} p_m ρ_m S^{-1/2}, S = Σ p_m ρ_m.

    The kernel of S is added to the first effect so the elements sum to 1.
    """
    codebook.check(ch)
    w = _priors(codebook, priors)
    mats = ch.matrices()
    weighted = [wm * mats[x] for wm, x in zip(w, codebook.codewords)]
    total = hermitian_part(sum(weighted))
    root = frac_power(total, -0.5)
    effects = [hermitian_part(root @ e @ root) for e in weighted]
    effects[0] = effects[0] + (np.eye(ch.d_B) - support_projector(total))
    return Povm(tuple(effects))


def decoding_success(ch: CqChannel, codebook: Codebook, decoder: Povm, priors: Optional[Sequence[float]] = None) -> float:
    """Σ_m p_m Tr[ρ_{x(m)} Λ_m]."""
    codebook.check(ch)
    if len(decoder) != codebook.message_count or decoder.dim != ch.d_B:
        raise InputError("decoder must have one effect per message on the output space")
    w = _priors(codebook, priors)
    mats = ch.matrices()
    return float(sum(wm * np.trace(mats[x] @ e).real for wm, x, e in zip(w, codebook.codewords, decoder.effects)))


def pgm_success(ch: CqChannel, codebook: Codebook, priors: Optional[Sequence[float]] = None) -> float:
    return decoding_success(ch, codebook, pgm_decoder(ch, codebook, priors), priors)


# --------------------------------------------------------------------------- #
# Direct-sum reduction
# --------------------------------------------------------------------------- #

def omega_mxb(ch: CqChannel, code: CodeLike) -> np.ndarray:
    """(1/|M|) Σ_{m,x} q(x|m) |m⟩⟨m| ⊗ |x⟩⟨x| ⊗ ρ_x on M ⊗ X ⊗ B.

    q(x|m) is the shared-randomness letter law of message m; for a
    deterministic codebook it is the point mass on x(m).
    """
    code = _as_code(code)
    code.check(ch)
    m_count, n = code.message_count, ch.input_alphabet_size
    q = code.conditional(n)
    mats = ch.matrices()
    out = np.zeros((m_count * n * ch.d_B,) * 2, dtype=complex)
    for m, x in zip(*np.nonzero(q)):
        out += q[m, x] / m_count * kron(_ket_bra(m, m_count), _ket_bra(x, n), mats[x])
    return out


def t_mxb(ch: CqChannel, code: CodeLike, decoder: DecoderLike) -> np.ndarray:
    """Σ_{m,x} |m⟩⟨m| ⊗ |x⟩⟨x| ⊗ T^x_m with T^x_m the decoders averaged given x(m) = x.

    T^x_m = Σ_k w_k [x_k(m) = x] Λ^k_m / q(x|m), and 0 where q(x|m) = 0. A
    deterministic codebook gives Σ_m |m⟩⟨m| ⊗ 1_X ⊗ Λ_m on its codeword blocks.
    """
    code = _as_code(code)
    povms = _decoders(ch, code, decoder)
    m_count, n = code.message_count, ch.input_alphabet_size
    q = code.conditional(n)
    blocks = np.zeros((m_count, n, ch.d_B, ch.d_B), dtype=complex)
    for wk, book, povm in zip(code.weights.weights, code.codebooks, povms):
        for m, (x, e) in enumerate(zip(book.codewords, povm.effects)):
            blocks[m, x] += wk * e
    out = np.zeros((m_count * n * ch.d_B,) * 2, dtype=complex)
    for m in range(m_count):
        for x in range(n):
            if q[m, x] > 0:
                out += kron(_ket_bra(m, m_count), _ket_bra(x, n), blocks[m, x] / q[m, x])
    return out


def _decoders(ch: CqChannel, code: SharedRandomnessCode, decoder: DecoderLike) -> List[Povm]:
    """One POVM per codebook: a fixed POVM, an aligned sequence, or a rule applied to each codebook."""
    if isinstance(decoder, Povm):
        povms = [decoder] * len(code.codebooks)
    elif callable(decoder):
        povms = [decoder(book) for book in code.codebooks]
    else:
        povms = list(decoder)
        if len(povms) != len(code.codebooks):
            raise InputError(f"{len(povms)} decoders for {len(code.codebooks)} codebooks")
    for povm in povms:
        if len(povm) != code.message_count or povm.dim != ch.d_B:
            raise InputError("decoder must have one effect per message on the output space")
    return povms


def _ket_bra(i: int, n: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[i, i] = 1.0
    return e


def direct_sum_reduction_check(
    ch: CqChannel,
    p: Optional[InputLike],
    code: CodeLike,
    decoder: DecoderLike,
    sigma_B: OperatorLike,
    alpha: float = 2.0,
) -> DirectSumReport:
    """Check the trace identities and the divergence identity of the ω/T construction.

    With a plain codebook and *p* None or equal to the distribution it
    induces, the code is deterministic. With any other *p* the codebook only
    fixes |M| and the codewords are drawn i.i.d. from *p* as shared
    randomness. A ``SharedRandomnessCode`` is used as given; *p*, if passed,
    must equal its letter marginal.
    """
    n = ch.input_alphabet_size
    if isinstance(code, Codebook):
        code.check(ch)
        induced = code.induced_distribution(n).weights
        if p is None or np.abs(_weights(p, n) - induced).max() <= MARGINAL_TOL:
            shared = SharedRandomnessCode.deterministic(code)
        else:
            shared = SharedRandomnessCode.iid(_weights(p, n), code.message_count)
    else:
        shared = code
        shared.check(ch)
        if p is not None and np.abs(_weights(p, n) - shared.induced_distribution(n).weights).max() > MARGINAL_TOL:
            raise InputError("p must be the letter marginal of the shared-randomness code")
    marginal = shared.induced_distribution(n).weights
    sigma = DensityOperator(as_matrix(sigma_B)).matrix
    if sigma.shape[0] != ch.d_B:
        raise DimensionError("sigma_B lives on the wrong space")

    povms = _decoders(ch, shared, decoder)
    success = float(sum(
        wk * decoding_success(ch, book, povm)
        for wk, book, povm in zip(shared.weights.weights, shared.codebooks, povms)
    ))
    omega = omega_mxb(ch, shared)
    t = t_mxb(ch, shared, povms)
    m_count = shared.message_count
    dims = (m_count, n, ch.d_B)
    product = kron(partial_trace(omega, dims, keep=(0, 1)), sigma)
    tr_omega = float(np.trace(omega @ t).real)
    tr_product = float(np.trace(product @ t).real)

    joint = joint_state(ch, marginal)
    lhs = _sandwiched(omega, product, alpha)
    rhs = _sandwiched(joint.rho_XB.matrix, kron(joint.rho_X, sigma), alpha)
    same = (math.isinf(lhs) and math.isinf(rhs)) or abs(lhs - rhs) <= DIVERGENCE_IDENTITY_TOL
    holds = (
        abs(tr_omega - success) <= IDENTITY_TOL
        and abs(tr_product - 1.0 / m_count) <= IDENTITY_TOL
        and same
    )
    return DirectSumReport(
        success_probability=success,
        trace_omega_t=tr_omega,
        trace_product_t=tr_product,
        inverse_message_count=1.0 / m_count,
        divergence_omega=lhs,
        divergence_joint=rhs,
        alpha=alpha,
        holds=holds,
    )
