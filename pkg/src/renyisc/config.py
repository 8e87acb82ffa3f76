"""Defaults and run configuration for renyisc.

GUARDRAIL: every default lives here exactly once. cli.py option defaults and
library signatures import these names; re-declaring a literal elsewhere is how
the CLI and the library drift apart.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Tuple

from .errors import InputError

THREADS_ENV = "RENYI_SC_THREADS"

# PVM search (measured divergence)
DEFAULT_RESTARTS = 16
DEFAULT_FD_STEP = 1e-5
DEFAULT_STALL_TOL = 1e-9
DEFAULT_STALL_ITERS = 50
DEFAULT_MAX_ITER = 500
DEFAULT_INNER_RESTARTS = 4

# mirror descent over σ_B / mirror ascent over p_X
DEFAULT_MD_MAX_ITER = 2000
DEFAULT_MD_TOL = 1e-9
DEFAULT_CAPACITY_RESTARTS = 8

DEFAULT_SEED = 0
DEFAULT_TOLERANCE = 1e-9

# {1} ∪ {1 + 10^k : k = -3, -2.5, ..., 2} ∪ {∞}: 13 points
DEFAULT_ALPHA_GRID: Tuple[float, ...] = (
    (1.0,) + tuple(1.0 + 10.0 ** (k / 2.0) for k in range(-6, 5)) + (math.inf,)
)
DEFAULT_GOLDEN_ITERS = 20

# Eigenvalues at or above -PSD_CLAMP_TOL are numerical zero. Eigenvalues down to
# -PSD_REJECT_TOL (relative to the spectral scale) are round-off and get clamped;
# anything below that is not positive semi-definite and is rejected.
PSD_CLAMP_TOL = 1e-12
PSD_REJECT_TOL = 1e-8

# n-fold products are dense; 2^6 = 64 is the largest dimension we build
DENSE_DIM_BUDGET = 64
# the measured-kind Rényi information nests a PVM search inside the σ_B search
MEASURED_JOINT_DIM_BUDGET = 8
# the PVM search over n copies is only run while d^n stays small
MEASURED_NFOLD_DIM_BUDGET = 8
# a shared-randomness code built from p_X enumerates |supp p|^|M| codebooks
RANDOM_CODE_BUDGET = 4096


def worker_count(default: int = 1) -> int:
    """Worker cap from ``RENYI_SC_THREADS``; anything unusable means 1."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs shared by the PVM search and the mirror-descent engines."""

    restarts: int = DEFAULT_RESTARTS
    fd_step: float = DEFAULT_FD_STEP
    stall_tol: float = DEFAULT_STALL_TOL
    stall_iters: int = DEFAULT_STALL_ITERS
    max_iter: int = DEFAULT_MAX_ITER
    inner_restarts: int = DEFAULT_INNER_RESTARTS
    md_max_iter: int = DEFAULT_MD_MAX_ITER
    md_tol: float = DEFAULT_MD_TOL
    capacity_restarts: int = DEFAULT_CAPACITY_RESTARTS
    seed: int = DEFAULT_SEED
    workers: int = field(default_factory=worker_count)

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.inner_restarts < 1 or self.capacity_restarts < 1:
            raise InputError("restart counts must be >= 1")
        if self.fd_step <= 0 or self.stall_tol <= 0 or self.md_tol <= 0:
            raise InputError("optimizer tolerances must be > 0")

    def with_(self, **changes) -> "OptimizerConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation's settings."""

    seed: int = DEFAULT_SEED
    alpha_grid: Tuple[float, ...] = DEFAULT_ALPHA_GRID
    tolerance: float = DEFAULT_TOLERANCE
    restarts: int = DEFAULT_RESTARTS
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        grid = tuple(float(a) for a in self.alpha_grid)
        if not grid:
            raise InputError("alpha grid is empty")
        if list(grid) != sorted(grid):
            raise InputError("alpha grid must be sorted ascending")
        if any(a <= 0 for a in grid):
            raise InputError("alpha grid values must be > 0")
        if self.tolerance <= 0:
            raise InputError("tolerance must be > 0")
        if self.restarts < 1:
            raise InputError("restarts must be >= 1")
        if self.format not in ("csv", "json"):
            raise InputError(f"unknown format {self.format!r}")
        object.__setattr__(self, "alpha_grid", grid)

    def require_alphas_at_least_one(self) -> None:
        if self.alpha_grid[0] < 1:
            raise InputError("this command needs alpha grid values >= 1")

    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(restarts=self.restarts, seed=self.seed)
