"""Utility helpers for renyisc: diagnostics, parallel map, random operators."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

import click
import numpy as np
from scipy.stats import unitary_group

T = TypeVar("T")
R = TypeVar("R")


def note(component: str, message: str) -> None:
    """One-line diagnostic on stderr: ``[renyisc] component: message``."""
    click.echo(f"[renyisc] {component}: {message}", err=True)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """``list(map(fn, items))`` over up to *workers* threads, order preserved.

    numpy/scipy release the GIL inside LAPACK, so threads are enough for the
    eigendecomposition-heavy workloads here.
    """
    seq: Sequence[T] = list(items)
    if workers <= 1 or len(seq) <= 1:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=min(workers, len(seq))) as pool:
        return list(pool.map(fn, seq))


def as_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary."""
    return unitary_group.rvs(dim, random_state=rng) if dim > 1 else np.ones((1, 1), complex)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix from the induced (Ginibre) measure.

    ``rank=None`` gives full rank almost surely; ``rank=1`` gives a pure state.
    """
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_psd(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random full-rank PSD matrix with trace *scale* (not normalised to a state)."""
    return scale * random_density(dim, rng)


def random_effect(dim: int, rng: np.random.Generator, floor: float = 0.0) -> np.ndarray:
    """Random test 0 <= T <= 1 with eigenvalues uniform in [floor, 1]."""
    u = random_unitary(dim, rng)
    w = rng.uniform(floor, 1.0, size=dim)
    t = (u * w) @ u.conj().T
    return (t + t.conj().T) / 2


def bloch_state(x: float, y: float, z: float) -> np.ndarray:
    """Qubit density matrix with Bloch vector (x, y, z), |r| <= 1."""
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=complex)
