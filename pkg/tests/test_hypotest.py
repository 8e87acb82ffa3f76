"""Tests for strong-converse bounds, exponent curves and Neyman–Pearson trade-offs.

Pins the contract:
  1. the one-shot bound never undercuts the type-I success of any test, and is
     tight (equal to Tr[σT]) when ρ = σ
  2. α grids must be >= 1 and sc_bound needs α = 1 in its grid
  3. the exponent is 0 up to the relative entropy, positive just past it with
     curvature 1/(2V), and +∞ on support violation
  4. n-copy Neyman–Pearson points sit on or above the single-copy exponent
  5. regularised measured values gain on the single-copy value for a
     noncommuting pair and never exceed the sandwiched divergence
"""

from __future__ import annotations

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Ensure the src package is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from renyisc.config import OptimizerConfig
from renyisc.divergences import relative_entropy, sandwiched_renyi
from renyisc.errors import BudgetError, DomainError, InputError
from renyisc.hypotest import (
    TestOutcome as Outcome,
    exponent_curve_from,
    neyman_pearson_test,
    nfold_consistency,
    nfold_tradeoff,
    regularized_measured_sequence,
    sc_bound,
    sc_bound_measured,
    sc_exponent_curve,
    threshold_rate,
    tradeoff_exponents,
)
from renyisc.opalg import DensityOperator
from renyisc.utils import bloch_state, random_density, random_effect

P = np.diag([0.5, 0.5])
Q = np.diag([0.25, 0.75])
# KL(P‖Q) and the variance of log(p/q) under P
D_PQ = 0.5 * math.log(4.0 / 3.0)
V_PQ = 0.25 * math.log(3.0) ** 2

RHO = DensityOperator(bloch_state(0.6, 0.0, 0.5))
SIGMA = DensityOperator(bloch_state(-0.3, 0.0, 0.2))


class TestOneShotBound(unittest.TestCase):
    def test_bound_dominates_success(self) -> None:
        rng = np.random.default_rng(0)
        for d in (2, 3, 4):
            for _ in range(5):
                rho, sigma = random_density(d, rng), random_density(d, rng)
                t = random_effect(d, rng)
                success = float(np.trace(rho @ t).real)
                res = sc_bound(rho, sigma, t)
                self.assertLessEqual(success, res.bound + 1e-12)
                self.assertLessEqual(res.bound, 1.0)

    def test_tight_for_identical_states(self) -> None:
        t = np.diag([0.3, 0.9])
        res = sc_bound(Q, Q, t)
        self.assertAlmostEqual(res.bound, float(np.trace(Q @ t).real), places=12)
        self.assertEqual(res.argmax_alpha, math.inf)

    def test_zero_type2_with_support_violation(self) -> None:
        res = sc_bound(np.eye(2) / 2, np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        self.assertEqual(res.bound, 1.0)

    def test_grid_requirements(self) -> None:
        with self.assertRaises(DomainError):
            sc_bound(P, Q, np.eye(2), alphas=(2.0, math.inf))
        with self.assertRaises(DomainError):
            sc_bound(P, Q, np.eye(2), alphas=(0.5, 1.0))

    def test_orthogonal_test_refused(self) -> None:
        with self.assertRaises(DomainError):
            sc_bound(np.diag([1.0, 0.0]), Q, np.diag([0.0, 1.0]))

    def test_measured_bound_is_smaller(self) -> None:
        t = neyman_pearson_test(RHO, SIGMA, 1.0)
        cfg = OptimizerConfig(restarts=2, workers=1)
        grid = (1.0, 1.5, 2.0, 5.0, math.inf)
        measured = sc_bound_measured(RHO, SIGMA, t, grid, cfg)
        self.assertEqual(measured.status, "heuristic")
        self.assertLessEqual(measured.bound, sc_bound(RHO, SIGMA, t, grid).bound + 1e-12)
        self.assertEqual(sc_bound_measured(P, Q, np.eye(2), grid, cfg).status, "exact")


class TestExponentCurve(unittest.TestCase):
    def test_zero_below_relative_entropy(self) -> None:
        curve = sc_exponent_curve(P, Q, [0.0, 0.5 * D_PQ, D_PQ])
        self.assertTrue(curve.finite)
        for pt in curve.points[:2]:
            self.assertEqual(pt.exponent, 0.0)
            self.assertEqual(pt.alpha_star, 1.0)
        # GUARDRAIL: at r = D the α -> 1 difference quotient is round-off limited
        self.assertAlmostEqual(curve.points[2].exponent, 0.0, places=12)

    def test_quadratic_just_above(self) -> None:
        delta = 0.01
        curve = sc_exponent_curve(P, Q, [D_PQ + delta])
        expected = delta ** 2 / (2.0 * V_PQ)
        self.assertGreater(curve.exponents[0], 0.6 * expected)
        self.assertLess(curve.exponents[0], 1.5 * expected)

    def test_large_rate_asymptote(self) -> None:
        r = 5.0
        e = sc_exponent_curve(P, Q, [r]).exponents[0]
        self.assertGreaterEqual(e, r - math.log(2.0) - 1e-12)
        self.assertLessEqual(e, r - D_PQ)

    def test_nondecreasing(self) -> None:
        rates = np.linspace(0.0, 2.0, 21)
        ex = sc_exponent_curve(RHO, SIGMA, rates).exponents
        for lo, hi in zip(ex, ex[1:]):
            self.assertLessEqual(lo, hi + 1e-12)

    def test_refinement_never_lowers_grid_value(self) -> None:
        rates = [0.4, 0.8, 1.5]
        plain = sc_exponent_curve(RHO, SIGMA, rates, refine=False).exponents
        refined = sc_exponent_curve(RHO, SIGMA, rates, refine=True).exponents
        for a, b in zip(plain, refined):
            self.assertGreaterEqual(b, a)

    def test_support_violation_is_infinite(self) -> None:
        curve = sc_exponent_curve(np.eye(2) / 2, np.diag([1.0, 0.0]), [0.0, 1.0])
        self.assertFalse(curve.finite)
        self.assertTrue(all(math.isinf(e) for e in curve.exponents))

    def test_generic_curve_from_closed_form(self) -> None:
        # D_α = 0 for all α: the supremum sits at α = ∞ with exponent equal to the rate
        curve = exponent_curve_from(lambda a: 0.0, [0.0, 0.25, 1.0], (1.0, 2.0, math.inf))
        self.assertEqual(curve.exponents, [0.0, 0.25, 1.0])
        self.assertEqual(curve.points[2].alpha_star, math.inf)

    def test_threshold_rate(self) -> None:
        curve = sc_exponent_curve(P, Q, [0.0, 0.05, 0.1, 0.15, 0.2])
        self.assertEqual(threshold_rate(curve), 0.1)
        self.assertIsNone(threshold_rate(sc_exponent_curve(P, Q, [0.5, 1.0])))
        self.assertEqual(threshold_rate(sc_exponent_curve(Q, Q, [0.0, 0.5])), 0.0)

    def test_threshold_at_relative_entropy(self) -> None:
        rng = np.random.default_rng(37)
        for k in range(20):
            rho = 0.8 * random_density(2, rng) + 0.1 * np.eye(2)
            sigma = 0.8 * random_density(2, rng) + 0.1 * np.eye(2)
            d = relative_entropy(rho, sigma)
            below, above = sc_exponent_curve(rho, sigma, [d - 1e-3, d + 1e-2]).exponents
            self.assertEqual(below, 0.0, f"pair {k}")
            self.assertGreaterEqual(above, 1e-6, f"pair {k}")


class TestNeymanPearson(unittest.TestCase):
    def test_test_operator(self) -> None:
        np.testing.assert_allclose(neyman_pearson_test(P, Q, 0.0).matrix, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(neyman_pearson_test(P, Q, 1.0).matrix, np.diag([1.0, 0.0]), atol=1e-12)
        with self.assertRaises(DomainError):
            neyman_pearson_test(P, Q, -1.0)

    def test_two_copy_commuting_point(self) -> None:
        (out,) = nfold_tradeoff(P, Q, 2, [1.0])
        self.assertAlmostEqual(out.type1_success, 0.75, places=12)
        self.assertAlmostEqual(out.type2_error, 0.4375, places=12)
        self.assertEqual((out.n, out.mu), (2, 1.0))

    def test_tradeoff_is_monotone_in_threshold(self) -> None:
        mus = list(np.exp(np.linspace(-3.0, 3.0, 13)))
        # commuting pair: the Neyman–Pearson projectors are nested in μ
        outs = nfold_tradeoff(P, Q, 3, mus, workers=2)
        for a, b in zip(outs, outs[1:]):
            self.assertGreaterEqual(a.type1_success, b.type1_success - 1e-12)
            self.assertGreaterEqual(a.type2_error, b.type2_error - 1e-12)

    def test_limits(self) -> None:
        with self.assertRaises(DomainError):
            nfold_tradeoff(P, Q, 0, [1.0])
        with self.assertRaises(DomainError):
            nfold_tradeoff(P, Q, 7, [1.0])
        with self.assertRaises(BudgetError):
            nfold_tradeoff(np.eye(3) / 3, np.eye(3) / 3, 4, [1.0])
        with self.assertRaises(DomainError):
            nfold_tradeoff(P, Q, 1, [-0.5])

    def test_exponents_and_consistency(self) -> None:
        outs = nfold_tradeoff(RHO, SIGMA, 4, [0.5, 2.0, 8.0])
        pairs = tradeoff_exponents(outs)
        self.assertEqual(len(pairs), 3)
        for (rate, err), o in zip(pairs, outs):
            self.assertGreater(o.type2_error, 0.0)
            self.assertGreater(o.type1_success, 0.0)
            self.assertAlmostEqual(rate, -math.log(o.type2_error) / 4, places=12)
            self.assertAlmostEqual(err, -math.log(o.type1_success) / 4, places=12)
        for rate, observed, bound in nfold_consistency(RHO, SIGMA, outs):
            self.assertGreaterEqual(observed, bound - 1e-9, msg=f"rate={rate}")

    def test_outcome_validation(self) -> None:
        with self.assertRaises(InputError):
            Outcome(type1_success=1.5, type2_error=0.2)
        self.assertEqual(Outcome(type1_success=1.0 + 1e-13, type2_error=0.0).type1_success, 1.0)


class TestRegularizedMeasured(unittest.TestCase):
    CFG = OptimizerConfig(restarts=2, workers=1)

    def test_commuting_is_additive(self) -> None:
        values = regularized_measured_sequence(P, Q, 2.0, 3, self.CFG)
        for v in values:
            self.assertAlmostEqual(v, math.log(4.0 / 3.0), places=9)

    def test_bracketed_by_single_copy_and_sandwiched(self) -> None:
        # GUARDRAIL: two copies measured jointly gain at least 1e-4 per copy on this pair
        values = regularized_measured_sequence(RHO, SIGMA, 2.0, 2, OptimizerConfig(workers=1))
        upper = sandwiched_renyi(RHO, SIGMA, 2.0)
        self.assertGreaterEqual(values[1] - values[0], 1e-4)
        for v in values:
            self.assertLessEqual(v, upper + 1e-6)
        self.assertGreater(values[0], 0.0)

    def test_limits(self) -> None:
        with self.assertRaises(DomainError):
            regularized_measured_sequence(P, Q, 2.0, 4)
        with self.assertRaises(BudgetError):
            regularized_measured_sequence(np.eye(3) / 3, np.eye(3) / 3, 2.0, 2)

    def test_support_violation(self) -> None:
        values = regularized_measured_sequence(np.eye(2) / 2, np.diag([1.0, 0.0]), 2.0, 2)
        self.assertEqual(values, [math.inf, math.inf])


if __name__ == "__main__":
    unittest.main()
