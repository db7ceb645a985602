import unittest
import numpy as np
from rerp.milp.model import SolverConfig
from rerp.model.instance import GeneratorSpec, PVSpec, LoadSpec, UncertaintyBudget, SystemInstance, UncertaintyRealization
from rerp.model.plan import CommitmentPlan
from rerp.model.random_instance import random_instance
from rerp.uc.dispatch import build_dispatch, solve_dispatch, dispatch_value, DispatchInfeasibleError

def _instance(demand, p_max=100.0, zbar=None):
    T = len(demand)
    gen = GeneratorSpec("G1", 0.0, 0.0, 0.0, 10.0, p_max, p_max, 0, 0, p_max, 0.0, p_max)
    pvs = [] if zbar is None else [PVSpec("PV1", zbar, 0.2 * np.asarray(zbar), 11.0 * np.asarray(zbar))]
    loads = [LoadSpec("D1", demand, 0.2 * np.asarray(demand))]
    return SystemInstance(T, [gen], pvs, loads, np.zeros(T), UncertaintyBudget(np.ones(T), np.ones(T)))

class TestDispatch(unittest.TestCase):
    def test_tracks_demand(self):
        inst = _instance([20.0, 30.0, 25.0])
        plan = CommitmentPlan.from_on(inst, np.ones((1, 3)))
        dispatch = solve_dispatch(inst, plan)
        np.testing.assert_allclose(dispatch.production, [[20.0, 30.0, 25.0]], atol=1e-6)
        self.assertAlmostEqual(dispatch.cost, 750.0, places=6)

    def test_zero_demand_off(self):
        inst = _instance([0.0, 0.0], zbar=[0.0, 0.0])
        plan = CommitmentPlan.from_on(inst, np.zeros((1, 2)), np.zeros((1, 2)))
        dispatch = solve_dispatch(inst, plan)
        np.testing.assert_allclose(dispatch.production, 0.0, atol=1e-9)
        np.testing.assert_allclose(dispatch.reserve, 0.0, atol=1e-9)

    def test_realization_and_curtailment(self):
        inst = _instance([20.0, 20.0], zbar=[5.0, 5.0])
        plan = CommitmentPlan.from_on(inst, np.ones((1, 2)), [[0, 1]])
        real = UncertaintyRealization([[1.0, 0.0]], [[1.0, 1.0]])
        dispatch = solve_dispatch(inst, plan, real)
        # slot 1: 24 MW demand minus 4 MW PV; slot 2: PV curtailed
        np.testing.assert_allclose(dispatch.production, [[20.0, 20.0]], atol=1e-6)

    def test_infeasible_reports_slot(self):
        inst = _instance([5.0, 5.0, 50.0], p_max=40.0)
        plan = CommitmentPlan.from_on(inst, np.ones((1, 3)))
        with self.assertRaises(DispatchInfeasibleError) as ctx:
            solve_dispatch(inst, plan)
        self.assertEqual(ctx.exception.slot, 3)

    def test_elastic_value(self):
        inst = _instance([5.0, 50.0], p_max=40.0)
        plan = CommitmentPlan.from_on(inst, np.ones((1, 2)))
        self.assertIsNone(dispatch_value(inst, plan))
        value = dispatch_value(inst, plan, elastic_penalty=100.0)
        self.assertAlmostEqual(value, 10.0 * 45.0 + 100.0 * 10.0, places=6)

    def test_backends_agree(self):
        for seed in range(3):
            inst = random_instance(seed, horizon=3)
            plan = CommitmentPlan.from_on(inst, np.ones((inst.n_g, 3)))
            a = dispatch_value(inst, plan, elastic_penalty=2000.0)
            b = dispatch_value(inst, plan, elastic_penalty=2000.0, config=SolverConfig(backend="scipy"))
            self.assertAlmostEqual(a, b, places=5)

    def test_plan_shape_mismatch(self):
        inst = _instance([5.0, 5.0])
        plan = CommitmentPlan.from_on(_instance([5.0, 5.0, 5.0]), np.ones((1, 3)))
        with self.assertRaises(ValueError):
            build_dispatch(inst, plan)

if __name__ == "__main__":
    unittest.main()
