"""Tests for the seeded property suites.

Pins the contract:
  1. every suite passes on a handful of seeds and counts its checks
  2. reruns with the same seed do the same work
  3. unknown suites and non-positive seed counts are input errors
  4. twenty seeds of every suite run in a tenth of the 200-seed time budget
"""

from __future__ import annotations

import sys
import time
import unittest
from pathlib import Path

import numpy as np

# Ensure the src package is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from renyisc.errors import InputError
from renyisc.opalg import DensityOperator
from renyisc.verify import SUITES, run_fixture_checks, run_suite, run_suites


class TestSuites(unittest.TestCase):
    def test_each_suite_passes(self) -> None:
        for name in ("holder", "variational", "converse"):
            report = run_suite(name, 2, seed=0)
            self.assertEqual(report.suite, name)
            self.assertEqual(report.seeds, 2)
            self.assertGreater(report.checks, 0)

    def test_coding_suite_single_seed(self) -> None:
        # GUARDRAIL: the coding suite solves capacities; one seed keeps it quick
        report = run_suite("coding", 1, seed=0)
        self.assertGreater(report.checks, 0)

    def test_converse_check_count(self) -> None:
        self.assertEqual(run_suite("converse", 3).as_dict(), {"suite": "converse", "seeds": 3, "checks": 9})

    def test_all_expands_in_order(self) -> None:
        names = [r.suite for r in run_suites("converse", 1)]
        self.assertEqual(names, ["converse"])
        self.assertEqual(SUITES, ("holder", "variational", "converse", "coding"))

    def test_bad_arguments(self) -> None:
        with self.assertRaises(InputError):
            run_suite("nope", 1)
        with self.assertRaises(InputError):
            run_suite("converse", 0)

    def test_all_suites_fit_the_time_budget(self) -> None:
        # GUARDRAIL: 200 seeds of --suite all must finish in 5 minutes; 20 seeds get a tenth
        start = time.perf_counter()
        reports = run_suites("all", 20)
        elapsed = time.perf_counter() - start
        self.assertEqual([r.suite for r in reports], list(SUITES))
        self.assertLess(elapsed, 30.0)


class TestFixtureChecks(unittest.TestCase):
    def test_pairs_of_user_states(self) -> None:
        states = [DensityOperator(np.diag([0.5, 0.5])), DensityOperator(np.diag([0.25, 0.75]))]
        report = run_fixture_checks(states)
        self.assertEqual(report.suite, "fixtures")
        # four ordered pairs, three saturation checks and one converse check each
        self.assertEqual(report.checks, 16)

    def test_mixed_dimensions_are_skipped(self) -> None:
        states = [DensityOperator(np.eye(2) / 2), DensityOperator(np.eye(3) / 3)]
        self.assertEqual(run_fixture_checks(states).checks, 8)


if __name__ == "__main__":
    unittest.main()
