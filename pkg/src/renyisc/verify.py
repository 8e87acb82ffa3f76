"""Seeded randomized property suites behind ``renyisc verify``.

Instance i of a run uses ``numpy.random.default_rng(seed + i)``, so a failure
report's seed reproduces the counterexample on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from .config import DEFAULT_SEED, OptimizerConfig
from .cqcoding import (
    CqChannel,
    Codebook,
    coding_upper_bound,
    direct_sum_reduction_check,
    helstrom_success,
    pgm_decoder,
    pgm_success,
)
from .divergences import (
    holder_check,
    holder_equality_witness,
    optimal_sandwiched_test,
    relative_entropy,
    sandwiched_renyi,
    umegaki_variational_objective,
    variational_objective_measured,
    variational_objective_sandwiched,
)
from .errors import InputError, PropertyViolation
from .hypotest import neyman_pearson_test, sc_bound
from .opalg import DensityOperator, hermitian_part, largest_eigenvalue
from .utils import note, random_density, random_effect, random_psd

SUITES = ("holder", "variational", "converse", "coding")

HOLDER_FORWARD_ALPHAS = (1.5, 2.0, 4.0)
HOLDER_REVERSE_ALPHAS = (0.3, 0.7)
HOLDER_DIMS = (2, 3)
EQUALITY_TOL = 1e-10

VARIATIONAL_ALPHAS = (1.5, 2.0, 3.0)
VARIATIONAL_DIMS = (2, 3)
SATURATION_TOL = 1e-8
PERTURB_DIRECTIONS = 20
PERTURB_STEP = 1e-4
PERTURB_TOL = 1e-7
BOUND_TOL = 1e-9

CONVERSE_DIMS = (2, 3, 4)
CONVERSE_TOL = 1e-12

CODING_MESSAGE_COUNTS = (2, 4)
# finite orders only: the order-∞ radius is an SDP solve per call. A truncated
# σ_B search overestimates I_α, so the bound stays a valid upper bound.
CODING_ALPHAS = (1.0, 1.25, 1.5, 2.0, 3.0, 5.0)
CODING_MD_MAX_ITER = 300
CODING_TOL = 1e-9


@dataclass
class SuiteReport:
    suite: str
    seeds: int
    checks: int = 0

    def as_dict(self) -> Dict[str, Any]:
        return {"suite": self.suite, "seeds": self.seeds, "checks": self.checks}


@dataclass
class _Instance:
    suite: str
    seed: int
    rng: np.random.Generator
    checks: List[str] = field(default_factory=list)

    def require(self, ok: bool, check: str, **values: Any) -> None:
        self.checks.append(check)
        if ok:
            return
        report = {"suite": self.suite, "seed": self.seed, "check": check, "values": values}
        note("verify", f"{self.suite}: {check} failed at seed {self.seed}")
        raise PropertyViolation(f"{self.suite}: {check} failed at seed {self.seed}", report)


def _state(dim: int, rng: np.random.Generator) -> np.ndarray:
    return DensityOperator(random_density(dim, rng)).matrix


def _random_direction(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = hermitian_part(g)
    return h / np.linalg.norm(h, 2)


# --------------------------------------------------------------------------- #
# Suites
# --------------------------------------------------------------------------- #

def _holder(inst: _Instance) -> None:
    rng = inst.rng
    for d in HOLDER_DIMS:
        x, y = random_psd(d, rng), random_psd(d, rng)
        sigma = _state(d, rng)
        for a in HOLDER_FORWARD_ALPHAS:
            rep = holder_check(x, y, sigma, a)
            inst.require(rep.holds, f"forward holder d={d} alpha={a}", lhs=rep.lhs, rhs=rep.rhs)
            w = holder_equality_witness(x, sigma, a)
            eq = holder_check(x, w, sigma, a)
            gap = abs(eq.rhs - eq.lhs) / max(abs(eq.rhs), 1.0)
            inst.require(gap <= EQUALITY_TOL, f"holder equality d={d} alpha={a}", lhs=eq.lhs, rhs=eq.rhs)
        for a in HOLDER_REVERSE_ALPHAS:
            rep = holder_check(x, y, sigma, a)
            inst.require(rep.holds, f"reverse holder d={d} alpha={a}", lhs=rep.lhs, rhs=rep.rhs)


def _variational(inst: _Instance) -> None:
    rng = inst.rng
    for d in VARIATIONAL_DIMS:
        rho, sigma = _state(d, rng), _state(d, rng)
        for a in VARIATIONAL_ALPHAS:
            target = sandwiched_renyi(rho, sigma, a)
            t_star = optimal_sandwiched_test(rho, sigma, a).matrix
            best = variational_objective_sandwiched(rho, sigma, a, t_star)
            inst.require(
                abs(best - target) <= SATURATION_TOL, f"saturation d={d} alpha={a}", objective=best, divergence=target
            )
            for _ in range(PERTURB_DIRECTIONS):
                moved = t_star + PERTURB_STEP * _random_direction(d, rng)
                if np.linalg.eigvalsh(moved).min() <= 0:
                    continue
                moved = moved / largest_eigenvalue(moved)
                val = variational_objective_sandwiched(rho, sigma, a, moved)
                inst.require(val <= best + PERTURB_TOL, f"local optimality d={d} alpha={a}", objective=val, optimum=best)
            t = random_effect(d, rng, floor=1e-3)
            for name, val in (
                ("sandwiched", variational_objective_sandwiched(rho, sigma, a, t)),
                ("measured", variational_objective_measured(rho, sigma, a, t)),
            ):
                inst.require(val <= target + BOUND_TOL, f"{name} objective bound d={d} alpha={a}", objective=val, divergence=target)
        t = random_effect(d, rng, floor=1e-3)
        val = umegaki_variational_objective(rho, sigma, t)
        target = relative_entropy(rho, sigma)
        inst.require(val <= target + BOUND_TOL, f"umegaki objective bound d={d}", objective=val, divergence=target)


def _converse(inst: _Instance) -> None:
    rng = inst.rng
    for d in CONVERSE_DIMS:
        rho, sigma = _state(d, rng), _state(d, rng)
        t = random_effect(d, rng)
        success = float(np.trace(rho @ t).real)
        bound = sc_bound(rho, sigma, t).bound
        inst.require(success <= bound + CONVERSE_TOL, f"one-shot converse d={d}", type1_success=success, bound=bound)


def _coding(inst: _Instance) -> None:
    rng = inst.rng
    ch = CqChannel((_state(2, rng), _state(2, rng)))
    cfg = OptimizerConfig(seed=inst.seed, md_max_iter=CODING_MD_MAX_ITER, workers=1)
    for m in CODING_MESSAGE_COUNTS:
        book = Codebook(tuple(int(x) for x in rng.integers(0, ch.input_alphabet_size, size=m)))
        p = book.induced_distribution(ch.input_alphabet_size)
        bound = coding_upper_bound(ch, p, m, CODING_ALPHAS, cfg=cfg)
        pgm = pgm_success(ch, book)
        inst.require(pgm <= bound + CODING_TOL, f"pgm below converse M={m}", success=pgm, bound=bound)
        if m == 2:
            hel = helstrom_success(ch, book)
            inst.require(hel <= bound + CODING_TOL, "helstrom below converse", success=hel, bound=bound)
        rep = direct_sum_reduction_check(ch, p, book, pgm_decoder(ch, book), _state(2, rng))
        inst.require(rep.holds, f"direct-sum identities M={m}", **rep._asdict())
        q = rng.dirichlet(np.ones(ch.input_alphabet_size))
        rep = direct_sum_reduction_check(ch, q, book, lambda b: pgm_decoder(ch, b), _state(2, rng))
        inst.require(rep.holds, f"shared-randomness direct-sum identities M={m}", **rep._asdict())


_SUITE_FUNCS: Dict[str, Callable[[_Instance], None]] = {
    "holder": _holder,
    "variational": _variational,
    "converse": _converse,
    "coding": _coding,
}


def run_suite(suite: str, seeds: int, seed: int = DEFAULT_SEED) -> SuiteReport:
    """Run *seeds* independent instances of *suite*; raises PropertyViolation on failure."""
    if suite not in _SUITE_FUNCS:
        raise InputError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES + ('all',))}")
    if seeds < 1:
        raise InputError("--seeds must be >= 1")
    report = SuiteReport(suite=suite, seeds=seeds)
    for i in range(seeds):
        inst = _Instance(suite=suite, seed=seed + i, rng=np.random.default_rng(seed + i))
        _SUITE_FUNCS[suite](inst)
        report.checks += len(inst.checks)
    return report


def run_suites(suite: str, seeds: int, seed: int = DEFAULT_SEED) -> List[SuiteReport]:
    names: Sequence[str] = SUITES if suite == "all" else (suite,)
    return [run_suite(name, seeds, seed) for name in names]


def run_fixture_checks(states: Sequence[DensityOperator]) -> SuiteReport:
    """Saturation and one-shot converse checks on every ordered pair of user states."""
    report = SuiteReport(suite="fixtures", seeds=len(states))
    for i, rho in enumerate(states):
        for j, sigma in enumerate(states):
            if rho.dim != sigma.dim:
                continue
            inst = _Instance(suite="fixtures", seed=DEFAULT_SEED, rng=np.random.default_rng(DEFAULT_SEED))
            for a in VARIATIONAL_ALPHAS:
                target = sandwiched_renyi(rho, sigma, a)
                if math.isinf(target):
                    continue
                best = variational_objective_sandwiched(rho, sigma, a, optimal_sandwiched_test(rho, sigma, a))
                inst.require(
                    abs(best - target) <= SATURATION_TOL,
                    f"saturation pair=({i},{j}) alpha={a}",
                    objective=best,
                    divergence=target,
                )
            t = neyman_pearson_test(rho, sigma, 1.0)
            success = float(np.trace(rho.matrix @ t.matrix).real)
            bound = sc_bound(rho, sigma, t).bound
            inst.require(success <= bound + CONVERSE_TOL, f"one-shot converse pair=({i},{j})", type1_success=success, bound=bound)
            report.checks += len(inst.checks)
    return report
