import unittest

import numpy as np

from chebycheck.continuous.families import parse_builtin_triple
from chebycheck.continuous.sampled import Monotonicity
from chebycheck.curvature import Curvature, check_curvature, make_power
from chebycheck.lab.generators import (P_FLOOR, Smoothness, draw_r, family_curvature, gen_monotone_fn, gen_sequence,
                                       gen_step_triple, gen_triple, gen_unsorted_sequence, gen_weight, random_outer)
from chebycheck.lab.oracles import oracle_continuous
from tests.base_test_case import BaseTestCase


class TestSequences(BaseTestCase):

    def test_same_seed_same_sequence(self):
        first = gen_sequence(np.random.default_rng(42), 7)
        second = gen_sequence(np.random.default_rng(42), 7)
        self.assertEqual(first, second)

    def test_single_element(self):
        self.assertEqual(gen_sequence(np.random.default_rng(1), 1).m, 1)

    def test_long_sequence_is_sorted(self):
        seq = gen_sequence(np.random.default_rng(2), 100, value_scale=5.0)
        self.assertEqual(seq.m, 100)
        self.assertTrue(np.all(np.diff(seq.a) <= 0.0))
        self.assertGreaterEqual(min(seq.p), P_FLOOR * 5.0)
        self.assertLessEqual(max(seq.b), 5.0)

    def test_unsorted_sequence_ascends(self):
        seq = gen_unsorted_sequence(np.random.default_rng(3), 6)
        self.assertTrue(np.all(np.diff(seq.a) >= 0.0))


class TestFunctions(BaseTestCase):

    def test_tags_hold_on_samples(self):
        rng = np.random.default_rng(4)
        x = np.linspace(0.0, 1.0, 257)
        for kind in (Monotonicity.NONINCREASING, Monotonicity.NONDECREASING):
            for smoothness in Smoothness:
                with self.subTest(kind=kind, smoothness=smoothness):
                    fn = gen_monotone_fn(rng, kind, smoothness)
                    values = fn(x)
                    self.assertIs(fn.monotonicity, kind)
                    self.assertTrue(np.all(values >= 0.0))
                    fn.check_tags(values, 1e-12)

    def test_single_piece_steps_keep_the_requested_tag(self):
        rng = np.random.default_rng(41)
        single_pieces = 0
        for _ in range(400):
            for kind in (Monotonicity.NONINCREASING, Monotonicity.NONDECREASING):
                fn = gen_monotone_fn(rng, kind, Smoothness.STEP)
                self.assertIs(fn.monotonicity, kind)
                single_pieces += kind is Monotonicity.NONDECREASING and not fn.breakpoints
        self.assertGreater(single_pieces, 0)

    def test_smooth_ends(self):
        rng = np.random.default_rng(5)
        down = gen_monotone_fn(rng, Monotonicity.NONINCREASING, Smoothness.SMOOTH, (0.5, 2.0))
        self.assertGreaterEqual(float(down(0.5)), float(down(2.0)))
        up = gen_monotone_fn(rng, Monotonicity.NONDECREASING, Smoothness.SMOOTH, (0.5, 2.0))
        self.assertEqual(float(up(0.5)), 0.0)

    def test_weight_is_positive(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            p = gen_weight(rng)
            self.assertGreaterEqual(float(np.min(p(np.linspace(0.0, 1.0, 101)))), 0.1)

    def test_step_triple_shares_partition(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            triple = gen_step_triple(rng)
            self.assertIs(triple.f.monotonicity, Monotonicity.NONINCREASING)
            self.assertEqual(triple.f.breakpoints, triple.g.breakpoints)
            self.assertEqual(triple.f.breakpoints, triple.p.breakpoints)
            self.assertLess(len(triple.f.breakpoints), 8)

    def test_triple_interval(self):
        triple = gen_triple(np.random.default_rng(8))
        self.assertTrue(-1.0 <= triple.left < triple.right <= triple.left + 2.0)


class TestOuterFunctions(BaseTestCase):

    def test_random_outer_curvature(self):
        rng = np.random.default_rng(9)
        for curvature in (Curvature.CONVEX, Curvature.CONCAVE):
            for _ in range(10):
                M = random_outer(rng, curvature)
                with self.subTest(curvature=curvature, label=M.label):
                    self.assertIs(M.curvature, curvature)
                    self.assertEqual(float(M(np.asarray([0.0]))[0]), 0.0)
                    self.assertTrue(check_curvature(M, 30, 20.0).passed)

    def test_family_curvature(self):
        self.assertIsNone(family_curvature('plin:random'))
        self.assertIs(family_curvature('power:2'), Curvature.CONVEX)
        self.assertIs(family_curvature('power:0.5'), Curvature.CONCAVE)

    def test_draw_r(self):
        rng = np.random.default_rng(10)
        low = [draw_r(rng, True) for _ in range(100)]
        high = [draw_r(rng, False) for _ in range(100)]
        self.assertTrue(all(0.1 <= r <= 1.0 for r in low))
        self.assertTrue(all(1.0 <= r <= 4.0 for r in high))


class TestOracleContinuous(BaseTestCase):

    def test_golden(self):
        lhs, bound = oracle_continuous(parse_builtin_triple('builtin:f=lin-dec,g=lin-inc'), make_power(2), 4096, 64)
        self.assertAlmostEqual(lhs, 1.0 / 12.0, delta=1e-8)
        self.assertAlmostEqual(bound, 0.125, delta=1e-9)

    def test_nondecreasing_f(self):
        lhs, bound = oracle_continuous(parse_builtin_triple('builtin:f=lin-inc,g=lin-dec'), make_power(2), 4096, 64)
        self.assertAlmostEqual(lhs, 1.0 / 12.0, delta=1e-8)
        self.assertAlmostEqual(bound, 0.125, delta=1e-8)

    def test_zero_g(self):
        self.assertEqual(oracle_continuous(parse_builtin_triple('builtin:f=lin-dec,g=zero'), make_power(2), 64, 8),
                         (0.0, 0.0))


if __name__ == '__main__':
    unittest.main()
