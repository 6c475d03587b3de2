import unittest

import numpy as np

from chebycheck.curvature import Curvature, make_power
from chebycheck.discrete import WeightedSequence, merge_step, reduce_chain
from chebycheck.errors import UsageError
from chebycheck.lab.generators import gen_sequence, random_outer
from tests.base_test_case import BaseTestCase


class TestMergeStep(BaseTestCase):

    def test_golden_case_two(self):
        result = merge_step(WeightedSequence([3, 2, 1], [1, 1, 1], [1, 1, 1]), make_power(2))
        self.assertEqual(result.h_values, (12.5, 17.0))
        self.assertEqual(result.case, 2)
        self.assertEqual(result.sequence.a, (4.0, 1.0))
        self.assertEqual(result.sequence.b, (1.0, 1.0))
        self.assertEqual(result.sequence.p, (1.0, 2.0))
        self.assertEqual(result.retired_mass, 0.0)

    def test_case_one(self):
        # h(x) = (3 - x)^2 peaks at the mean split x1 = 1.5
        result = merge_step(WeightedSequence([2, 1], [0, 1], [1, 1]), make_power(2))
        self.assertEqual(result.h_values, (2.25, 0.0))
        self.assertEqual(result.case, 1)
        self.assertEqual(result.sequence.a, (1.5,))
        self.assertEqual(result.sequence.b, (0.5,))
        self.assertEqual(result.sequence.p, (2.0,))

    def test_single_element(self):
        with self.assertRaises(UsageError):
            merge_step(WeightedSequence([1], [1], [1]), make_power(2))


class TestReduceChain(BaseTestCase):

    def test_golden_chain(self):
        chain = reduce_chain(WeightedSequence([3, 2, 1], [1, 1, 1], [1, 1, 1]), make_power(2))
        self.assertEqual(chain.steps, 2)
        self.assertEqual(chain.lhs, [14.0, 18.0, 36.0])
        self.assertEqual(chain.bounds, [36.0, 36.0, 36.0])
        self.assertEqual(chain.cases, [2, 2])
        self.assertEqual(chain.retired_mass, [0.0, 2.0])

    def test_single_element_chain(self):
        chain = reduce_chain(WeightedSequence([2], [3], [1]), make_power(2))
        self.assertEqual(chain.steps, 0)
        self.assertEqual(chain.lhs, [12.0])

    def test_zero_values(self):
        chain = reduce_chain(WeightedSequence([0, 0, 0], [1, 2, 3], [1, 1, 1]), make_power(2))
        self.assertEqual(chain.lhs, [0.0] * len(chain.stages))

    def test_chain_laws_on_random_sequences(self):
        rng = np.random.default_rng(4021)
        for trial in range(1000):
            seq = gen_sequence(rng, int(rng.integers(3, 11)))
            M = make_power(2) if trial % 2 else random_outer(rng, Curvature.CONVEX)
            with self.subTest(trial=trial):
                chain = reduce_chain(seq, M, tol_rel=1e-9)
                mass_a = seq.mass_a()
                mass_b = seq.mass_b()
                retired = np.cumsum([0.0] + chain.retired_mass)
                for stage, moved in zip(chain.stages, retired):
                    self.assertLessEqual(abs(stage.mass_a() - mass_a), 1e-12 * max(1.0, mass_a))
                    self.assertLessEqual(abs(stage.mass_b() + moved - mass_b), 1e-12 * max(1.0, mass_b))
                    self.assertTrue(all(x >= y for x, y in zip(stage.a, stage.a[1:])))
                tolerance = 1e-9 * (1.0 + max(chain.lhs))
                self.assertTrue(np.all(np.diff(chain.lhs) >= -tolerance))
                self.assertTrue(np.all(np.diff(chain.bounds) <= 1e-9 * (1.0 + max(chain.bounds))))

    def test_concave_chain_runs_the_other_way(self):
        chain = reduce_chain(WeightedSequence([3, 2, 1], [1, 1, 1], [1, 1, 1]), make_power(0.5))
        self.assertTrue(np.all(np.diff(chain.lhs) <= 1e-12))
        self.assertTrue(np.all(np.diff(chain.bounds) >= -1e-12))


if __name__ == '__main__':
    unittest.main()
