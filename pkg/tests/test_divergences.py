"""Tests for the Rényi divergence families and their variational expressions.

Pins the contract:
  1. classical values against closed forms, with the KL and max-ratio limits
  2. support conventions: +inf on support violation for α >= 1, +inf only on
     orthogonality for α < 1
  3. sandwiched <= Petz, sandwiched is nondecreasing in α, additive on tensor
     products, continuous at α = 1 and α = ∞, and all quantum families
     collapse to the classical value on commuting pairs
  4. each variational objective is bounded by its divergence and saturated by
     the closed-form optimal test
  5. Hölder holds forward for α >= 1 and in reverse for α < 1, with equality
     at the explicit witness
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
from renyisc.divergences import (
    DivergenceResult,
    ProbDist,
    RenyiOrder,
    classical_renyi,
    divergence,
    holder_check,
    holder_equality_witness,
    measured_alpha1_objective,
    measured_upper_bound,
    optimal_sandwiched_test,
    optimal_umegaki_test,
    petz_renyi,
    petz_variational_objective,
    quantized_test,
    relative_entropy,
    sandwiched_renyi,
    umegaki_variational_objective,
    variational_objective_measured,
    variational_objective_sandwiched,
    von_neumann_entropy,
)
from renyisc.errors import DimensionError, DomainError, InputError, SupportError
from renyisc.opalg import DensityOperator, kron, operator_norm
from renyisc.utils import random_density, random_effect, random_psd

P = (0.5, 0.5)
Q = (0.25, 0.75)


def _random_pair(dim: int, seed: int):
    rng = np.random.default_rng(seed)
    return DensityOperator(random_density(dim, rng)), DensityOperator(random_density(dim, rng))


def _floored_pair(dim: int, rng: np.random.Generator):
    """Random pair mixed with 20% white noise, so both are comfortably full rank."""
    noise = np.eye(dim) / dim
    return tuple(0.8 * random_density(dim, rng) + 0.2 * noise for _ in range(2))


class TestRenyiOrderAndProbDist(unittest.TestCase):
    def test_order_range(self) -> None:
        for bad in (0.0, -1.0, float("nan")):
            with self.assertRaises(DomainError):
                RenyiOrder(bad)

    def test_conjugate_and_tags(self) -> None:
        self.assertEqual(RenyiOrder(2.0).conjugate, 2.0)
        self.assertEqual(RenyiOrder.one().conjugate, math.inf)
        self.assertEqual(RenyiOrder.infinity().conjugate, 1.0)
        self.assertEqual(RenyiOrder.infinity().exponent_weight, 1.0)
        self.assertAlmostEqual(RenyiOrder(4.0).exponent_weight, 0.75)
        self.assertEqual(str(RenyiOrder.infinity()), "inf")

    def test_probdist_validation(self) -> None:
        with self.assertRaises(InputError):
            ProbDist([0.5, 0.6])
        with self.assertRaises(InputError):
            ProbDist([1.5, -0.5])
        with self.assertRaises(InputError):
            ProbDist([])
        self.assertEqual(len(ProbDist.uniform(4)), 4)


class TestClassical(unittest.TestCase):
    def test_closed_forms(self) -> None:
        self.assertAlmostEqual(classical_renyi(P, Q, 2.0), math.log(4.0 / 3.0), places=12)
        self.assertAlmostEqual(classical_renyi(P, Q, 1.0), 0.5 * math.log(4.0 / 3.0), places=12)
        self.assertAlmostEqual(classical_renyi(P, Q, math.inf), math.log(2.0), places=12)

    def test_half_order_is_bhattacharyya(self) -> None:
        bc = math.sqrt(0.5 * 0.25) + math.sqrt(0.5 * 0.75)
        self.assertAlmostEqual(classical_renyi(P, Q, 0.5), -2.0 * math.log(bc), places=12)

    def test_support_conventions(self) -> None:
        p, q = (0.5, 0.5), (1.0, 0.0)
        self.assertEqual(classical_renyi(p, q, 1.0), math.inf)
        self.assertEqual(classical_renyi(p, q, 2.0), math.inf)
        self.assertTrue(math.isfinite(classical_renyi(p, q, 0.5)))
        self.assertEqual(classical_renyi((1.0, 0.0), (0.0, 1.0), 0.5), math.inf)

    def test_identical_is_zero(self) -> None:
        for a in (0.3, 1.0, 2.0, math.inf):
            self.assertAlmostEqual(classical_renyi(Q, Q, a), 0.0, places=12)

    def test_nondecreasing_in_order(self) -> None:
        values = [classical_renyi(P, Q, a) for a in (0.2, 0.5, 1.0, 1.5, 3.0, 10.0, math.inf)]
        for lo, hi in zip(values, values[1:]):
            self.assertLessEqual(lo, hi + 1e-12)

    def test_length_mismatch(self) -> None:
        with self.assertRaises(DimensionError):
            classical_renyi(P, (0.2, 0.3, 0.5), 2.0)


class TestQuantumFamilies(unittest.TestCase):
    def test_commuting_pair_collapses_to_classical(self) -> None:
        rho, sigma = np.diag(P), np.diag(Q)
        for a in (0.5, 1.0, 2.0, 5.0):
            expected = classical_renyi(P, Q, a)
            self.assertAlmostEqual(sandwiched_renyi(rho, sigma, a), expected, places=10)
            self.assertAlmostEqual(petz_renyi(rho, sigma, a), expected, places=10)
        self.assertAlmostEqual(sandwiched_renyi(rho, sigma, math.inf), math.log(2.0), places=10)

    def test_sandwiched_below_petz(self) -> None:
        # GUARDRAIL: Araki-Lieb-Thirring; the two differ strictly on non-commuting pairs
        for seed in range(5):
            rho, sigma = _random_pair(3, seed)
            for a in (0.6, 1.5, 2.0, 4.0):
                self.assertLessEqual(sandwiched_renyi(rho, sigma, a), petz_renyi(rho, sigma, a) + 1e-10)

    def test_sandwiched_nondecreasing_in_order(self) -> None:
        rho, sigma = _random_pair(3, 11)
        grid = (0.5, 0.8, 1.0, 1.001, 1.5, 2.0, 4.0, 32.6, math.inf)
        values = [sandwiched_renyi(rho, sigma, a) for a in grid]
        for lo, hi in zip(values, values[1:]):
            self.assertLessEqual(lo, hi + 1e-9)

    def test_order_one_is_the_limit(self) -> None:
        rho, sigma = _random_pair(2, 3)
        d = relative_entropy(rho, sigma)
        self.assertAlmostEqual(sandwiched_renyi(rho, sigma, 1.0), d, places=14)
        self.assertAlmostEqual(sandwiched_renyi(rho, sigma, 1.0 + 1e-5), d, delta=1e-4)
        self.assertAlmostEqual(petz_renyi(rho, sigma, 1.0 - 1e-5), d, delta=1e-4)

    def test_sandwiched_is_tensor_additive(self) -> None:
        rng = np.random.default_rng(29)
        for _ in range(100):
            (r1, s1), (r2, s2) = _floored_pair(2, rng), _floored_pair(2, rng)
            for a in (0.7, 1.5, 2.0, math.inf):
                joint = sandwiched_renyi(kron(r1, r2), kron(s1, s2), a)
                parts = sandwiched_renyi(r1, s1, a) + sandwiched_renyi(r2, s2, a)
                self.assertAlmostEqual(joint, parts, delta=1e-8, msg=f"alpha={a}")

    def test_continuous_at_one_and_infinity(self) -> None:
        rng = np.random.default_rng(31)
        for _ in range(20):
            rho, sigma = _floored_pair(2, rng)
            d = relative_entropy(rho, sigma)
            for a in (1.0 - 1e-4, 1.0 + 1e-4):
                self.assertAlmostEqual(sandwiched_renyi(rho, sigma, a), d, delta=1e-3, msg=f"alpha={a}")
            self.assertAlmostEqual(
                sandwiched_renyi(rho, sigma, math.inf), sandwiched_renyi(rho, sigma, 1e4), delta=1e-3
            )

    def test_relative_entropy_of_maximally_mixed(self) -> None:
        rho, _ = _random_pair(3, 4)
        d = relative_entropy(rho, np.eye(3) / 3)
        self.assertAlmostEqual(d, math.log(3) - von_neumann_entropy(rho), places=10)

    def test_support_violation_is_infinite(self) -> None:
        rho, sigma = np.diag([0.5, 0.5]), np.diag([1.0, 0.0])
        for a in (1.0, 2.0, math.inf):
            self.assertEqual(sandwiched_renyi(rho, sigma, a), math.inf)
        self.assertTrue(math.isfinite(sandwiched_renyi(rho, sigma, 0.7)))
        self.assertEqual(petz_renyi(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), 0.5), math.inf)

    def test_petz_at_infinity_is_refused(self) -> None:
        with self.assertRaises(DomainError):
            petz_renyi(np.eye(2) / 2, np.eye(2) / 2, math.inf)

    def test_measured_bracket_switches_family(self) -> None:
        rho, sigma = _random_pair(2, 5)
        self.assertEqual(measured_upper_bound(rho, sigma, 2.0), sandwiched_renyi(rho, sigma, 2.0))
        self.assertEqual(measured_upper_bound(rho, sigma, 0.3), petz_renyi(rho, sigma, 0.3))

    def test_dimension_mismatch(self) -> None:
        with self.assertRaises(DimensionError):
            sandwiched_renyi(np.eye(2) / 2, np.eye(3) / 3, 2.0)


class TestVariational(unittest.TestCase):
    def test_sandwiched_objective_saturates(self) -> None:
        for seed in range(4):
            rho, sigma = _random_pair(3, seed)
            for a in (1.5, 2.0, 3.0):
                t = optimal_sandwiched_test(rho, sigma, a)
                self.assertAlmostEqual(
                    variational_objective_sandwiched(rho, sigma, a, t), sandwiched_renyi(rho, sigma, a), delta=1e-8
                )
                self.assertAlmostEqual(operator_norm(t.matrix), 1.0, places=12)

    def test_objectives_bounded_by_divergence(self) -> None:
        rng = np.random.default_rng(7)
        for seed in range(4):
            rho, sigma = _random_pair(3, 100 + seed)
            t = random_effect(3, rng, floor=1e-3)
            for a in (1.5, 2.0, 3.0):
                target = sandwiched_renyi(rho, sigma, a)
                self.assertLessEqual(variational_objective_sandwiched(rho, sigma, a, t), target + 1e-9)
                self.assertLessEqual(variational_objective_measured(rho, sigma, a, t), target + 1e-9)
            self.assertLessEqual(umegaki_variational_objective(rho, sigma, t), relative_entropy(rho, sigma) + 1e-9)
            self.assertLessEqual(measured_alpha1_objective(rho, sigma, t), relative_entropy(rho, sigma) + 1e-9)

    def test_umegaki_objective_saturates(self) -> None:
        rho, sigma = _random_pair(2, 21)
        t = optimal_umegaki_test(rho, sigma)
        self.assertAlmostEqual(umegaki_variational_objective(rho, sigma, t), relative_entropy(rho, sigma), delta=1e-8)

    def test_orthogonal_test_gives_minus_infinity(self) -> None:
        rho, sigma = np.diag([1.0, 0.0]), np.eye(2) / 2
        self.assertEqual(variational_objective_measured(rho, sigma, 2.0, np.diag([0.0, 1.0])), -math.inf)

    def test_low_order_needs_positive_test(self) -> None:
        rho, sigma = _random_pair(2, 1)
        with self.assertRaises(DomainError):
            variational_objective_measured(rho, sigma, 0.5, np.diag([1.0, 0.0]))
        with self.assertRaises(DomainError):
            variational_objective_sandwiched(rho, sigma, 1.0, np.eye(2))

    def test_optimal_test_preconditions(self) -> None:
        with self.assertRaises(SupportError):
            optimal_sandwiched_test(np.eye(2) / 2, np.diag([1.0, 0.0]), 2.0)
        with self.assertRaises(DomainError):
            optimal_sandwiched_test(np.eye(2) / 2, np.eye(2) / 2, 0.5)

    def test_petz_objective_identity_and_commuting_optimum(self) -> None:
        rho, sigma = _random_pair(3, 9)
        self.assertAlmostEqual(petz_variational_objective(rho, sigma, 2.0, np.eye(3)), 0.0, places=10)
        p, q, a = np.array(P), np.array(Q), 2.5
        t = (p / q) ** (a - 1.0)
        value = petz_variational_objective(np.diag(p), np.diag(q), a, np.diag(t / t.max()))
        self.assertAlmostEqual(value, classical_renyi(p, q, a), places=10)

    def test_quantized_test_is_close(self) -> None:
        rng = np.random.default_rng(2)
        t = random_effect(3, rng)
        for n in (1, 4, 16):
            self.assertLessEqual(operator_norm(quantized_test(t, n).matrix - t), 1.0 / n + 1e-12)
        with self.assertRaises(DomainError):
            quantized_test(t, 0)


class TestHolder(unittest.TestCase):
    def test_forward_and_reverse(self) -> None:
        rng = np.random.default_rng(3)
        for _ in range(5):
            x, y = random_psd(3, rng), random_psd(3, rng)
            sigma = random_density(3, rng)
            for a in (1.5, 2.0, 4.0, math.inf):
                rep = holder_check(x, y, sigma, a)
                self.assertFalse(rep.reverse)
                self.assertTrue(rep.holds, (a, rep))
            for a in (0.3, 0.7):
                rep = holder_check(x, y, sigma, a)
                self.assertTrue(rep.reverse)
                self.assertTrue(rep.holds, (a, rep))

    def test_equality_witness(self) -> None:
        rng = np.random.default_rng(4)
        x, sigma = random_psd(3, rng), random_density(3, rng)
        for a in (1.5, 2.0, 4.0):
            w = holder_equality_witness(x, sigma, a)
            rep = holder_check(x, w, sigma, a)
            self.assertAlmostEqual(rep.lhs, rep.rhs, delta=1e-10 * max(1.0, abs(rep.rhs)))

    def test_reverse_needs_support(self) -> None:
        with self.assertRaises(DomainError):
            holder_check(np.eye(2), np.diag([1.0, 0.0]), np.eye(2) / 2, 0.5)


class TestDispatch(unittest.TestCase):
    def test_kinds(self) -> None:
        rho, sigma = np.diag(P), np.diag(Q)
        for kind in ("classical", "petz", "sandwiched", "measured"):
            res = divergence(rho, sigma, 2.0, kind, OptimizerConfig(restarts=2))
            self.assertIsInstance(res, DivergenceResult)
            self.assertAlmostEqual(res.value, math.log(4.0 / 3.0), places=9)
            self.assertEqual(res.status, "exact")

    def test_classical_kind_reads_diagonals(self) -> None:
        plus = np.full((2, 2), 0.5)
        res = divergence(plus, np.eye(2) / 2, 2.0, "classical")
        self.assertAlmostEqual(res.value, 0.0, places=12)

    def test_sandwiched_result_carries_test(self) -> None:
        rho, sigma = _random_pair(2, 6)
        self.assertIsNotNone(divergence(rho, sigma, 2.0, "sandwiched").test)
        self.assertIsNone(divergence(rho, sigma, 1.0, "sandwiched").test)

    def test_infinite_result(self) -> None:
        res = divergence(np.eye(2) / 2, np.diag([1.0, 0.0]), 2.0, "sandwiched")
        self.assertFalse(res.finite)

    def test_unknown_kind(self) -> None:
        with self.assertRaises(InputError):
            divergence(np.eye(2) / 2, np.eye(2) / 2, 2.0, "geometric")


if __name__ == "__main__":
    unittest.main()
