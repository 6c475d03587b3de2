import unittest

import numpy as np

from chebycheck.conditions import Direction, check_condition, corollary_bound, steffensen_ratio
from chebycheck.continuous.bounds import classical_chebyshev
from chebycheck.continuous.families import make_function
from chebycheck.continuous.sampled import Monotonicity
from chebycheck.errors import DomainError, UsageError
from chebycheck.lab.generators import any_smoothness, draw_r, gen_interval, gen_monotone_fn, gen_nonnegative, gen_weight
from chebycheck.reports import LOWER, UPPER
from tests.base_test_case import BaseTestCase

PANELS = 2 ** 16


def unit(family: str, **params):
    return make_function(family, (0.0, 1.0), params)


class TestRatio(BaseTestCase):

    def test_linear_g_half_power(self):
        for s in (0.1, 0.5, 1.0):
            with self.subTest(s=s):
                self.assertAlmostEqual(steffensen_ratio(unit('const'), unit('lin-inc'), s, 0.5, 64), 0.5, places=12)

    def test_constant_g(self):
        self.assertAlmostEqual(steffensen_ratio(unit('const'), unit('const'), 0.3, 1.0, 64), 1.0, places=12)
        self.assertEqual(steffensen_ratio(unit('const'), unit('zero'), 0.3, 2.0, 64), 0.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            steffensen_ratio(unit('const'), unit('const'), 0.0, 1.0, 64)
        with self.assertRaises(DomainError):
            steffensen_ratio(unit('const'), unit('const'), 1.5, 1.0, 64)
        with self.assertRaises(DomainError):
            steffensen_ratio(unit('const'), unit('const'), 0.5, 0.0, 64)


class TestCheckCondition(BaseTestCase):

    def test_linear_g_passes_first_condition(self):
        report = check_condition(unit('const'), unit('lin-inc'), 0.5, 'c1', 64, 4096)
        self.assertTrue(report.passed)
        self.assertFalse(report.edge_growth)
        self.assertEqual(report.direction, 'corollary1')
        self.assertEqual(len(report.grid), 64)
        np.testing.assert_allclose(report.ratio, 0.5, atol=1e-9)
        self.assertAlmostEqual(report.boundary_ratio, 0.5, places=9)

    def test_constant_g_passes_both(self):
        for direction in ('c1', 'c2'):
            with self.subTest(direction=direction):
                self.assertTrue(check_condition(unit('const'), unit('const'), 1.0, direction, 32, 256).passed)

    def test_decreasing_g_fails_first_condition(self):
        # ratio 1/s - 1/2 blows up toward s = 0
        report = check_condition(unit('const'), unit('lin-dec'), 0.5, 'c1', 64, 4096)
        self.assertFalse(report.passed)
        self.assertTrue(report.edge_growth)
        self.assertAlmostEqual(report.worst_s, 1.0 / 64.0)
        self.assertLess(report.worst_margin, 0.0)

    def test_decreasing_g_passes_second_condition_at_one(self):
        # ratio 1 - s/2 stays above its value at s = 1
        report = check_condition(unit('const'), unit('lin-dec'), 1.0, 'c2', 64, 4096)
        self.assertTrue(report.passed)

    def test_r_must_fit_direction(self):
        with self.assertRaises(UsageError):
            check_condition(unit('const'), unit('lin-dec'), 0.5, 'c2', 16, 64)
        with self.assertRaises(UsageError):
            check_condition(unit('const'), unit('lin-inc'), 2.0, 'c1', 16, 64)
        with self.assertRaises(DomainError):
            check_condition(unit('const'), unit('lin-inc'), -1.0, 'c1', 16, 64)

    def test_rows(self):
        report = check_condition(unit('const'), unit('lin-inc'), 1.0, 'c1', 4, 256)
        rows = report.rows()
        self.assertEqual([row['s'] for row in rows], [0.25, 0.5, 0.75, 1.0])
        self.assertAlmostEqual(rows[-1]['margin'], 0.0)
        self.assertEqual(report.to_dict()['rows'], rows)

    def test_infinite_interval_needs_horizon(self):
        p, g = (make_function(family, (0.0, float('inf'))) for family in ('exp-dec', 'const'))
        with self.assertRaises(UsageError):
            check_condition(p, g, 1.0, 'c1', 16, 64)
        self.assertTrue(check_condition(p, g, 1.0, 'c2', 16, 4096, horizon=30.0).passed)


class TestCorollaryBound(BaseTestCase):

    def test_golden(self):
        report = corollary_bound(unit('const'), unit('lin-inc'), unit('lin-dec'), 0.5, 'c1', PANELS, s_grid=64)
        self.assertAlmostEqual(report.lhs, 1.0 / 6.0, delta=1e-7)
        self.assertAlmostEqual(report.bound, 2.0 / 9.0, delta=1e-7)
        self.assertTrue(report.holds)
        self.assertEqual(report.kind, UPPER)
        self.assertEqual(report.theorem, 'corollary1')

    def test_r_one_is_classical(self):
        p, g, f = unit('exp-dec'), unit('lin-inc'), unit('lin-dec')
        report = corollary_bound(p, g, f, 1.0, 'c1', 4096, s_grid=64)
        classical = classical_chebyshev(p, f, g, 4096)
        self.assertAlmostEqual(report.bound, classical.rhs, places=10)
        self.assertAlmostEqual(report.lhs, classical.lhs, places=10)

    def test_second_condition_is_lower(self):
        report = corollary_bound(unit('const'), unit('lin-dec'), unit('lin-dec'), 1.0, 'c2', 4096, s_grid=64)
        self.assertEqual(report.kind, LOWER)
        self.assertTrue(report.holds)

    def test_constant_f_is_equality(self):
        report = corollary_bound(unit('const'), unit('lin-inc'), unit('const', value=2.0), 0.5, 'c1', 4096, s_grid=64)
        self.assertAlmostEqual(report.lhs, report.bound, places=10)
        self.assertTrue(report.holds)

    def test_failed_condition(self):
        with self.assertRaises(UsageError):
            corollary_bound(unit('const'), unit('lin-dec'), unit('lin-dec'), 0.5, 'c1', 256, s_grid=16)

    def test_f_must_be_nonincreasing(self):
        with self.assertRaises(UsageError):
            corollary_bound(unit('const'), unit('lin-inc'), unit('lin-inc'), 0.5, 'c1', 256, s_grid=16)

    def test_condition_must_match(self):
        condition = check_condition(unit('const'), unit('lin-inc'), 0.5, 'c1', 16, 256)
        with self.assertRaises(UsageError):
            corollary_bound(unit('const'), unit('lin-inc'), unit('lin-dec'), 0.25, 'c1', 256, condition=condition)
        with self.assertRaises(UsageError):
            corollary_bound(unit('const'), unit('lin-inc'), unit('lin-dec'), 0.5, 'c2', 256, condition=condition)

    def test_direction_parse(self):
        self.assertIs(Direction.parse('c1'), Direction.COROLLARY1)
        self.assertIs(Direction.parse('corollary2'), Direction.COROLLARY2)
        self.assertIs(Direction.parse(Direction.COROLLARY2), Direction.COROLLARY2)
        with self.assertRaises(UsageError):
            Direction.parse('c3')


class TestImplication(BaseTestCase):
    """Whenever the grid check passes, the power-mean bound holds."""

    def _run(self, seed: int, direction: str, g_kind: Monotonicity) -> int:
        rng = np.random.default_rng(seed)
        passes = 0
        for trial in range(1000):
            interval = gen_interval(rng)
            p = gen_weight(rng, interval)
            g = gen_nonnegative(rng, interval, g_kind)
            f = gen_monotone_fn(rng, Monotonicity.NONINCREASING, any_smoothness(rng), interval)
            r = draw_r(rng, direction == 'c1')
            condition = check_condition(p, g, r, direction, 128, 2 ** 12)
            if not condition.passed or condition.edge_growth:
                continue
            passes += 1
            report = corollary_bound(p, g, f, r, direction, 2 ** 12, condition=condition)
            with self.subTest(trial=trial):
                self.assertTrue(report.holds, report)
        return passes

    def test_first_condition(self):
        self.assertGreater(self._run(5, 'c1', Monotonicity.NONDECREASING), 0)

    def test_second_condition(self):
        self._run(6, 'c2', Monotonicity.NONINCREASING)


if __name__ == '__main__':
    unittest.main()
