import unittest
import numpy as np
from scipy.optimize import linprog
from rerp.milp.model import LE, EQ, GE, Status
from rerp.milp.simplex import solve_lp

inf = np.inf

class TestSolveLp(unittest.TestCase):
    def test_textbook(self):
        A = np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 2.0]])
        res = solve_lp([-3.0, -5.0], A, [LE, LE, LE], [4.0, 12.0, 18.0], [0.0, 0.0], [inf, inf])
        self.assertEqual(res.status, Status.OPTIMAL)
        self.assertAlmostEqual(res.objective, -36.0)
        np.testing.assert_allclose(res.x, [2.0, 6.0], atol=1e-9)

    def test_infeasible(self):
        A = np.array([[1.0, 1.0]])
        res = solve_lp([1.0, 1.0], A, [GE], [5.0], [0.0, 0.0], [1.0, 1.0])
        self.assertEqual(res.status, Status.INFEASIBLE)

    def test_unbounded(self):
        A = np.array([[1.0, -1.0]])
        res = solve_lp([-1.0, 0.0], A, [LE], [1.0], [0.0, 0.0], [inf, inf])
        self.assertEqual(res.status, Status.UNBOUNDED)

    def test_free_and_negative_bounds(self):
        A = np.array([[1.0, 1.0]])
        res = solve_lp([1.0, 1.0], A, [GE], [-3.0], [-inf, -2.0], [inf, 5.0])
        self.assertEqual(res.status, Status.OPTIMAL)
        self.assertAlmostEqual(res.objective, -3.0)
        self.assertGreaterEqual(res.x[1], -2.0 - 1e-9)

    def test_fixed_variable(self):
        A = np.array([[1.0, 1.0]])
        res = solve_lp([1.0, 2.0], A, [EQ], [3.0], [1.5, 0.0], [1.5, inf])
        self.assertEqual(res.status, Status.OPTIMAL)
        np.testing.assert_allclose(res.x, [1.5, 1.5], atol=1e-9)

    def test_redundant_equalities(self):
        A = np.array([[1.0, 1.0], [2.0, 2.0]])
        res = solve_lp([1.0, 2.0], A, [EQ, EQ], [2.0, 4.0], [0.0, 0.0], [inf, inf])
        self.assertEqual(res.status, Status.OPTIMAL)
        self.assertAlmostEqual(res.objective, 2.0)

    def test_degenerate_cycling_example(self):
        # classic instance on which Dantzig pricing with naive ties cycles
        c = [-0.75, 20.0, -0.5, 6.0]
        A = np.array([[0.25, -8.0, -1.0, 9.0],
                      [0.5, -12.0, -0.5, 3.0],
                      [0.0, 0.0, 1.0, 0.0]])
        res = solve_lp(c, A, [LE, LE, LE], [0.0, 0.0, 1.0], np.zeros(4), np.full(4, inf))
        self.assertEqual(res.status, Status.OPTIMAL)
        self.assertAlmostEqual(res.objective, -1.25)

    def test_no_rows(self):
        res = solve_lp([1.0, -1.0], np.zeros((0, 2)), [], [], [0.0, -1.0], [2.0, 3.0])
        self.assertEqual(res.status, Status.OPTIMAL)
        self.assertAlmostEqual(res.objective, -3.0)

    def test_matches_highs(self):
        for seed in range(8):
            rng = np.random.default_rng(seed)
            m, n = 6, 5
            A = rng.uniform(-1.0, 2.0, size=(m, n))
            x0 = rng.uniform(0.0, 3.0, size=n)
            b = A.dot(x0) + rng.uniform(0.0, 1.0, size=m)
            c = rng.uniform(-2.0, 2.0, size=n)
            ub = np.full(n, 10.0)
            senses = [LE] * (m - 1) + [GE]
            b[-1] = A[-1].dot(x0) - 0.5

            res = solve_lp(c, A, senses, b, np.zeros(n), ub)
            A_ub = np.vstack([A[:-1], -A[-1:]])
            b_ub = np.concatenate([b[:-1], -b[-1:]])
            ref = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=list(zip(np.zeros(n), ub)), method="highs")

            self.assertEqual(res.status, Status.OPTIMAL)
            self.assertAlmostEqual(res.objective, ref.fun, places=6)

    def test_matches_explicit_dual(self):
        for seed in range(100):
            rng = np.random.default_rng(1000 + seed)
            m, n = int(rng.integers(2, 7)), int(rng.integers(2, 7))
            A = rng.uniform(-2.0, 2.0, size=(m, n))
            x0 = rng.uniform(0.0, 3.0, size=n)
            ub = rng.uniform(3.0, 6.0, size=n)
            c = rng.uniform(-2.0, 2.0, size=n)
            is_le = rng.random(m) < 0.5
            slack = rng.uniform(0.0, 1.0, size=m)
            b = np.where(is_le, A.dot(x0) + slack, A.dot(x0) - slack)
            senses = [LE if le else GE for le in is_le]

            primal = solve_lp(c, A, senses, b, np.zeros(n), ub)

            # rows as G x >= h; dual: max h.y - ub.v  s.t.  G'y - v <= c, y, v >= 0
            G = np.where(is_le[:, None], -A, A)
            h = np.where(is_le, -b, b)
            D = np.hstack([G.T, -np.eye(n)])
            dual = solve_lp(np.concatenate([-h, ub]), D, [LE] * n, c, np.zeros(m + n), np.full(m + n, inf))

            self.assertEqual(primal.status, Status.OPTIMAL, "seed {}".format(seed))
            self.assertEqual(dual.status, Status.OPTIMAL, "seed {}".format(seed))
            self.assertAlmostEqual(primal.objective, -dual.objective, delta=1e-6 * max(1.0, abs(primal.objective)),
                    msg="seed {}".format(seed))

if __name__ == "__main__":
    unittest.main()
