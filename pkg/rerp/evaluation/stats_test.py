import unittest
import numpy as np
from rerp.evaluation.stats import shapiro_wilk, f_test, t_test

class TestShapiroWilk(unittest.TestCase):
    def test_rejects_uniform(self):
        x = np.random.default_rng(0).uniform(size=500)
        self.assertLess(shapiro_wilk(x).p_value, 0.05)

    def test_calibration(self):
        rejected = 0
        trials = 1000
        for seed in range(trials):
            x = np.random.default_rng(seed).standard_normal(500)
            rejected += shapiro_wilk(x).p_value < 0.05
        self.assertAlmostEqual(rejected / trials, 0.05, delta=0.02)

    def test_preconditions(self):
        with self.assertRaises(ValueError):
            shapiro_wilk([1.0, 2.0])
        with self.assertRaises(ValueError):
            shapiro_wilk(np.ones(10))

class TestFTest(unittest.TestCase):
    def test_same_sample(self):
        x = np.random.default_rng(1).standard_normal(30)
        res = f_test(x, x)
        self.assertAlmostEqual(res.statistic, 1.0)
        self.assertAlmostEqual(res.p_value, 1.0)

    def test_variance_ratio(self):
        rng = np.random.default_rng(2)
        res = f_test(2.0 * rng.standard_normal(500), rng.standard_normal(500))
        self.assertLess(res.p_value, 0.05)
        # tiny samples with equal spread
        self.assertGreater(f_test([0.0, 1.0, 2.0], [5.0, 6.0, 7.0]).p_value, 0.05)

    def test_zero_variance(self):
        with self.assertRaises(ValueError):
            f_test([1.0, 2.0], [3.0, 3.0])
        with self.assertRaises(ValueError):
            f_test([1.0], [3.0, 4.0])

class TestTTest(unittest.TestCase):
    def test_identical(self):
        x = np.random.default_rng(3).standard_normal(20)
        res = t_test(x, x)
        self.assertAlmostEqual(res.statistic, 0.0)
        self.assertAlmostEqual(res.p_value, 1.0)

    def test_separated_means(self):
        rng = np.random.default_rng(4)
        res = t_test(0.1 * rng.standard_normal(100), 1.0 + 0.1 * rng.standard_normal(100))
        self.assertLess(res.p_value, 0.001)
        self.assertLess(res.statistic, 0.0)

    def test_zero_variance(self):
        with self.assertRaises(ValueError):
            t_test([1.0, 1.0], [2.0, 2.0])

if __name__ == "__main__":
    unittest.main()
