"""Finite-dimensional Hermitian operator algebra.

Dense numpy matrices throughout. Every function of an operator goes through
one eigendecomposition (``scipy.linalg.eigh``) and acts on eigenvalues only,
so results are basis independent even for degenerate spectra.

Spectral cutoff: an eigenvalue is treated as zero when it is at most
``SPECTRAL_CUTOFF * λ_max``. Negative powers are taken on the support
(pseudo-inverse convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, NamedTuple, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .config import PSD_CLAMP_TOL, PSD_REJECT_TOL
from .errors import DimensionError, DomainError, InputError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
PROJECTOR_TOL = 1e-10
SPECTRAL_CUTOFF = 1e-12
SUPPORT_TOL = 1e-10
IMAG_TOL = 1e-10
COMMUTE_TOL = 1e-12

# generic weight for the simultaneous-diagonalisation trick in common_eigenbasis
_MIX = math.pi


# --------------------------------------------------------------------------- #
# Validated operator types
# --------------------------------------------------------------------------- #

@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Immutable Hermitian matrix.

    Construction checks hermiticity relative to the largest absolute entry and
    stores the exactly Hermitian part, read-only.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
        scale = float(np.abs(m).max()) or 1.0
        if float(np.abs(m - m.conj().T).max()) > HERMITICITY_TOL * scale:
            raise InputError("matrix is not Hermitian")
        m = hermitian_part(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return np.asarray(self.matrix, dtype=dtype)


class DensityOperator(HermitianOperator):
    """PSD, unit-trace Hermitian matrix.

    Eigenvalues down to ``-PSD_REJECT_TOL`` are clamped to zero and the trace
    renormalised; anything more negative is a genuine input error.
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        tr = float(np.trace(self.matrix).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InputError(f"density operator trace is {tr!r}, expected 1")
        w, v = eigh(self.matrix)
        _require_psd(w, "density operator")
        if w.min() < 0:
            w = np.clip(w, 0.0, None)
            m = hermitian_part((v * w) @ v.conj().T)
            m /= np.trace(m).real
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)


class Effect(HermitianOperator):
    """Test operator 0 <= T <= 1 (eigenvalues clamped into [0, 1])."""

    def __post_init__(self) -> None:
        super().__post_init__()
        w, v = eigh(self.matrix)
        if w.min() < -PSD_REJECT_TOL or w.max() > 1.0 + PSD_REJECT_TOL:
            raise DomainError(
                f"effect eigenvalues must lie in [0, 1], got [{w.min():.3e}, {w.max():.3e}]"
            )
        if w.min() < 0 or w.max() > 1:
            m = hermitian_part((v * np.clip(w, 0.0, 1.0)) @ v.conj().T)
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class Pvm:
    """Projection-valued measure: orthogonal projectors summing to the identity."""

    projectors: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        ps = tuple(hermitian_part(as_matrix(p)) for p in self.projectors)
        if not ps:
            raise InputError("a PVM needs at least one element")
        d = ps[0].shape[0]
        for i, p in enumerate(ps):
            if p.shape != (d, d):
                raise DimensionError("PVM elements have different dimensions")
            if scipy.linalg.norm(p @ p - p, 2) > PROJECTOR_TOL:
                raise InputError(f"PVM element {i} is not idempotent")
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if scipy.linalg.norm(ps[i] @ ps[j], 2) > PROJECTOR_TOL:
                    raise InputError(f"PVM elements {i} and {j} are not orthogonal")
        if scipy.linalg.norm(sum(ps) - np.eye(d), 2) > PROJECTOR_TOL:
            raise InputError("PVM elements do not sum to the identity")
        for p in ps:
            p.setflags(write=False)
        object.__setattr__(self, "projectors", ps)

    @classmethod
    def from_basis(cls, basis: np.ndarray) -> "Pvm":
        """Rank-1 PVM from the columns of a unitary."""
        u = np.asarray(basis, dtype=complex)
        return cls(tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1])))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def probabilities(self, state) -> np.ndarray:
        """Outcome distribution Tr[state P(i)], clipped at 0."""
        m = as_matrix(state)
        return np.clip(np.array([np.trace(m @ p).real for p in self.projectors]), 0.0, None)


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive operator-valued measure."""

    effects: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        es = tuple(hermitian_part(as_matrix(e)) for e in self.effects)
        if not es:
            raise InputError("a POVM needs at least one element")
        d = es[0].shape[0]
        for i, e in enumerate(es):
            if e.shape != (d, d):
                raise DimensionError("POVM elements have different dimensions")
            if scipy.linalg.eigvalsh(e).min() < -PSD_CLAMP_TOL:
                raise InputError(f"POVM element {i} is not positive semi-definite")
        if scipy.linalg.norm(sum(es) - np.eye(d), 2) > PROJECTOR_TOL:
            raise InputError("POVM elements do not sum to the identity")
        for e in es:
            e.setflags(write=False)
        object.__setattr__(self, "effects", es)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.effects)


OperatorLike = Union[HermitianOperator, np.ndarray, Sequence[Sequence[complex]]]


# --------------------------------------------------------------------------- #
# Function calculus
# --------------------------------------------------------------------------- #

def as_matrix(x: OperatorLike) -> np.ndarray:
    """Plain complex square matrix view of *x* (no validation beyond shape)."""
    if isinstance(x, HermitianOperator):
        return x.matrix
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def eigh(a: OperatorLike) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and eigenvectors of the Hermitian part of *a*."""
    return scipy.linalg.eigh(hermitian_part(as_matrix(a)))


def _require_psd(w: np.ndarray, what: str = "operator") -> None:
    if w.size and w.min() < -PSD_REJECT_TOL * max(1.0, float(np.abs(w).max())):
        raise DomainError(f"{what} is not positive semi-definite (min eigenvalue {w.min():.3e})")


def support_mask(w: np.ndarray) -> np.ndarray:
    """Eigenvalues counted as nonzero under the relative spectral cutoff."""
    top = float(w.max()) if w.size else 0.0
    if top <= 0:
        return np.zeros(w.shape, dtype=bool)
    return w > SPECTRAL_CUTOFF * top


def spectral_map(a: OperatorLike, f: Callable[[np.ndarray], np.ndarray], *, psd: bool = True) -> np.ndarray:
    """U f(Λ) U† for a = U Λ U†.

    With ``psd=True`` the input must be PSD and *f* only sees the support;
    eigenvalues under the cutoff map to 0 (pseudo-inverse convention).
    """
    w, v = eigh(a)
    if psd:
        _require_psd(w)
        mask = support_mask(w)
        fw = np.zeros_like(w)
        fw[mask] = f(w[mask])
    else:
        fw = f(w)
    return hermitian_part((v * fw) @ v.conj().T)


def frac_power(a: OperatorLike, t: float) -> np.ndarray:
    """a^t on the support of PSD *a*; negative *t* is a pseudo-inverse power."""
    return spectral_map(a, lambda w: w ** t)


def support_projector(a: OperatorLike) -> np.ndarray:
    return spectral_map(a, np.ones_like)


def log_on_support(a: OperatorLike) -> np.ndarray:
    """log a on supp(a), 0 on the kernel."""
    return spectral_map(a, np.log)


def abs_op(a: OperatorLike) -> np.ndarray:
    """|a| for Hermitian *a*."""
    return spectral_map(a, np.abs, psd=False)


def expm_hermitian(h: OperatorLike) -> np.ndarray:
    return spectral_map(h, np.exp, psd=False)


def nonnegative_projector(a: OperatorLike, tol: float = SPECTRAL_CUTOFF) -> np.ndarray:
    """Projector onto the eigenspaces of Hermitian *a* with eigenvalue >= -tol·‖a‖."""
    w, v = eigh(a)
    scale = float(np.abs(w).max()) if w.size else 0.0
    keep = w >= -tol * max(scale, 1e-300)
    vk = v[:, keep]
    return hermitian_part(vk @ vk.conj().T)


def rank(a: OperatorLike) -> int:
    w, _ = eigh(a)
    return int(support_mask(w).sum())


def trace_norm(x: OperatorLike) -> float:
    return float(scipy.linalg.svdvals(as_matrix(x)).sum())


def operator_norm(x: OperatorLike) -> float:
    return float(scipy.linalg.svdvals(as_matrix(x)).max())


def largest_eigenvalue(a: OperatorLike) -> float:
    return float(scipy.linalg.eigvalsh(hermitian_part(as_matrix(a)))[-1])


def commutator_norm(a: OperatorLike, b: OperatorLike) -> float:
    am, bm = as_matrix(a), as_matrix(b)
    return operator_norm(am @ bm - bm @ am)


def commute(a: OperatorLike, b: OperatorLike, tol: float = COMMUTE_TOL) -> bool:
    return commutator_norm(a, b) <= tol


def common_eigenbasis(a: OperatorLike, b: OperatorLike) -> np.ndarray:
    """Unitary diagonalising both of two commuting Hermitian matrices.

    Eigenvectors of a + π·b; a degenerate eigenspace of the mix is a joint
    eigenspace of *a* and *b* unless their eigenvalues conspire with π.
    """
    _, v = eigh(as_matrix(a) + _MIX * as_matrix(b))
    return v


# --------------------------------------------------------------------------- #
# Quotients, weighted norms, inner products
# --------------------------------------------------------------------------- #

class Quotient(NamedTuple):
    value: np.ndarray
    support_violation: bool


def support_violation(x: OperatorLike, y: OperatorLike, tol: float = SUPPORT_TOL) -> bool:
    """True when (1 - supp(y)) x (1 - supp(y)) is not negligible."""
    xm = as_matrix(x)
    q = np.eye(xm.shape[0]) - support_projector(y)
    return operator_norm(q @ xm @ q) > tol


def nc_quotient(x: OperatorLike, y: OperatorLike) -> Quotient:
    """Noncommutative quotient y^{-1/2} x y^{-1/2} (pseudo-inverse square root)."""
    xm, ym = as_matrix(x), as_matrix(y)
    _same_dim(xm, ym)
    r = frac_power(ym, -0.5)
    return Quotient(hermitian_part(r @ xm @ r), support_violation(xm, ym))


def weighted_norm(x: OperatorLike, sigma: OperatorLike, p: float) -> float:
    """(Tr |σ^{1/(2p)} x σ^{1/(2p)}|^p)^{1/p}; the operator norm of x at p = ∞.

    For p < 0 the power is taken on the support of the sandwiched operator;
    if that support is smaller than supp(σ) the negative-power trace diverges
    and the result is +∞.
    """
    xm, sm = as_matrix(x), as_matrix(sigma)
    _same_dim(xm, sm)
    if p == 0:
        raise DomainError("the p -> 0 weighted norm is not implemented; use p != 0")
    if math.isinf(p):
        if p < 0:
            raise DomainError("weighted norm order must not be -inf")
        return operator_norm(xm)
    s = frac_power(sm, 1.0 / (2.0 * p))
    sv = scipy.linalg.svdvals(s @ xm @ s)
    if p > 0:
        return float(np.sum(sv ** p) ** (1.0 / p))
    mask = support_mask(sv)
    if mask.sum() < rank(sm):
        return math.inf
    total = float(np.sum(sv[mask] ** p))
    return total ** (1.0 / p) if total > 0 else math.inf


def kms_inner(x: OperatorLike, y: OperatorLike, sigma: OperatorLike) -> float:
    """KMS inner product Tr[x† σ^{1/2} y σ^{1/2}], returned as a real number."""
    xm, ym, sm = as_matrix(x), as_matrix(y), as_matrix(sigma)
    _same_dim(xm, ym)
    _same_dim(xm, sm)
    s = frac_power(sm, 0.5)
    val = complex(np.trace(xm.conj().T @ s @ ym @ s))
    if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
        raise DomainError(f"KMS inner product has imaginary part {val.imag:.3e}; inputs not Hermitian?")
    return val.real


# --------------------------------------------------------------------------- #
# Tensor structure
# --------------------------------------------------------------------------- #

def kron(*ops: OperatorLike) -> np.ndarray:
    """Tensor product of any number of operators (left to right)."""
    if not ops:
        raise DimensionError("kron needs at least one operator")
    return reduce(np.kron, (as_matrix(o) for o in ops))


def kron_power(a: OperatorLike, n: int) -> np.ndarray:
    if n < 1:
        raise DimensionError("tensor power must be >= 1")
    return kron(*([as_matrix(a)] * n))


def partial_trace(a: OperatorLike, dims: Sequence[int], keep: Union[int, Iterable[int]]) -> np.ndarray:
    """Trace out every subsystem not in *keep* (kept subsystems stay in order)."""
    m = as_matrix(a)
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims) or int(np.prod(dims)) != m.shape[0]:
        raise DimensionError(f"subsystem dims {dims} do not match matrix size {m.shape[0]}")
    keep_set = {keep} if isinstance(keep, (int, np.integer)) else set(int(k) for k in keep)
    if not keep_set or any(k < 0 or k >= len(dims) for k in keep_set):
        raise DimensionError(f"keep={keep!r} does not index a subsystem of {dims}")
    t = m.reshape(dims + dims)
    remaining = len(dims)
    # highest index first so the lower axis numbers stay valid
    for i in reversed(range(len(dims))):
        if i in keep_set:
            continue
        t = np.trace(t, axis1=i, axis2=i + remaining)
        remaining -= 1
    kd = int(np.prod([dims[i] for i in sorted(keep_set)]))
    return t.reshape(kd, kd)


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
