import unittest
import numpy as np
from rerp.model.instance import GeneratorSpec, PVSpec, LoadSpec, UncertaintyBudget, SystemInstance
from rerp.model.plan import CommitmentPlan, DispatchPlan

def _instance(min_up=3, min_down=2, initial_on=0):
    gen = GeneratorSpec("G1", 5.0, 20.0, 3.0, 10.0, 100.0, 100.0, min_up, min_down, 100.0, 0.0, 50.0,
            initial_on=initial_on, initial_output=10.0 if initial_on else 0.0)
    pv = PVSpec("PV1", [1.0] * 5, [0.2] * 5, [11.0] * 5)
    load = LoadSpec("D1", [5.0] * 5, [1.0] * 5)
    return SystemInstance(5, [gen], [pv], [load], [0.0] * 5, UncertaintyBudget([0.0] * 5, [0.0] * 5))

class TestCommitmentPlan(unittest.TestCase):
    def test_from_on(self):
        inst = _instance()
        plan = CommitmentPlan.from_on(inst, [[0, 1, 1, 1, 0]])
        np.testing.assert_array_equal(plan.start, [[0, 1, 0, 0, 0]])
        np.testing.assert_array_equal(plan.stop, [[0, 0, 0, 0, 1]])
        self.assertEqual(plan.violations(inst), [])
        self.assertAlmostEqual(plan.commitment_cost(inst), 3 * 5.0 + 20.0 + 3.0)

    def test_min_up_broken(self):
        inst = _instance(min_up=3)
        plan = CommitmentPlan.from_on(inst, [[0, 1, 1, 0, 0]])
        messages = plan.violations(inst)
        self.assertTrue(any("min-up" in m for m in messages))

    def test_min_down_broken(self):
        inst = _instance(min_up=0, min_down=3, initial_on=1)
        plan = CommitmentPlan.from_on(inst, [[1, 0, 1, 1, 1]])
        self.assertTrue(any("min-down" in m for m in plan.violations(inst)))

    def test_start_flag_missing(self):
        inst = _instance(min_up=0, min_down=0)
        plan = CommitmentPlan([[1, 1, 1, 1, 1]], [[0] * 5], [[0] * 5], [[0] * 5])
        self.assertTrue(any("start flag" in m for m in plan.violations(inst)))

    def test_curtailment_cost_and_signature(self):
        inst = _instance()
        a = CommitmentPlan.from_on(inst, [[0] * 5], [[1, 0, 0, 0, 1]])
        b = CommitmentPlan.from_on(inst, [[0] * 5], [[1, 0, 0, 0, 0]])
        self.assertAlmostEqual(a.curtailment_cost(inst), 22.0)
        self.assertNotEqual(a.signature(), b.signature())

    def test_rejects_fractional(self):
        with self.assertRaises(ValueError):
            CommitmentPlan([[2]], [[0]], [[0]], [[0]])

    def test_read_only(self):
        plan = CommitmentPlan.from_on(_instance(), [[0] * 5])
        with self.assertRaises(ValueError):
            plan.on[0, 0] = 1

class TestDispatchPlan(unittest.TestCase):
    def test_fuel_cost(self):
        inst = _instance()
        dispatch = DispatchPlan(np.full((1, 5), 4.0), np.zeros((1, 5)))
        self.assertAlmostEqual(dispatch.fuel_cost(inst), 200.0)

if __name__ == "__main__":
    unittest.main()
