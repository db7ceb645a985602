import unittest
import numpy as np
from rerp.fairness.gini import (EnergyVector, GiniUndefinedError, total_power, l1_deviation, lorenz_curve,
        gini_index, gini_index_normalized)

class TestTotalPower(unittest.TestCase):
    def test_masking(self):
        np.testing.assert_array_equal(total_power(np.zeros((2, 3))).values, [0.0, 0.0])
        self.assertEqual(total_power([[1.0, 2.0, 3.0]], np.ones((1, 3))).values[0], 0.0)
        self.assertEqual(total_power([[1.0, 2.0, 3.0]], [[0, 1, 0]]).values[0], 4.0)

    def test_errors(self):
        with self.assertRaises(ValueError):
            total_power([[1.0, 2.0]], [[0, 1, 0]])
        with self.assertRaises(ValueError):
            total_power([[-1.0]])
        with self.assertRaises(ValueError):
            EnergyVector([1.0, -0.5])

class TestL1(unittest.TestCase):
    def test_values(self):
        self.assertEqual(l1_deviation([2.0, 2.0, 2.0]), 0.0)
        self.assertEqual(l1_deviation([0.0, 6.0]), 6.0)
        self.assertEqual(l1_deviation(EnergyVector([1.0, 2.0, 3.0])), 2.0)
        with self.assertRaises(ValueError):
            l1_deviation([])

class TestGini(unittest.TestCase):
    def test_values(self):
        self.assertAlmostEqual(gini_index([4.0, 4.0, 4.0, 4.0]), 0.0)
        self.assertAlmostEqual(gini_index([0.0, 0.0, 7.0]), 1.0)
        self.assertAlmostEqual(gini_index([1.0, 2.0, 3.0]), 1.0 / 3.0)
        self.assertAlmostEqual(gini_index([3.0, 1.0, 2.0]), 1.0 / 3.0)
        np.testing.assert_allclose(lorenz_curve([3.0, 1.0, 2.0]), [0.0, 1/6, 0.5, 1.0])

    def test_undefined(self):
        with self.assertRaises(GiniUndefinedError):
            gini_index([0.0, 0.0])
        with self.assertRaises(ValueError):
            gini_index([])

    def test_properties(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            n = int(rng.integers(1, 8))
            s = rng.uniform(0.0, 10.0, size=n)
            g = gini_index(s)
            self.assertGreaterEqual(g, -1e-12)
            self.assertLessEqual(g, (n - 1) / 2.0 + 1e-12)
            # power-of-two scaling and reordering leave the sorted shares bit-identical
            self.assertEqual(gini_index(4.0 * s), g)
            self.assertEqual(gini_index(rng.permutation(s)), g)
            self.assertAlmostEqual(gini_index(3.5 * s), g, places=12)
            self.assertLessEqual(gini_index_normalized(s), 1.0 + 1e-12)

    def test_zero_iff_equal(self):
        for s in ([5.0, 5.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.1]):
            self.assertEqual(abs(gini_index(s)) < 1e-12, l1_deviation(s) < 1e-12)

    def test_normalized(self):
        self.assertAlmostEqual(gini_index_normalized([0.0, 0.0, 0.0, 9.0]), 1.0)
        self.assertAlmostEqual(gini_index_normalized([0.0, 9.0]), 1.0)
        self.assertEqual(gini_index_normalized([9.0]), 0.0)

if __name__ == "__main__":
    unittest.main()
