import dataclasses
import unittest
import numpy as np
from rerp.model.instance import (GeneratorSpec, PVSpec, LoadSpec, UncertaintyBudget, SystemInstance,
        UncertaintyRealization, validate_instance, apply_uncertainty)
from rerp.model.random_instance import random_instance, asymmetric_pv_instance

def _one_slot_instance(dbar=10.0, dhat=2.0, zbar=5.0, zhat=1.0):
    gen = GeneratorSpec("G1", 0.0, 0.0, 0.0, 10.0, 100.0, 100.0, 0, 0, 100.0, 0.0, 50.0)
    pv = PVSpec("PV1", [zbar], [zhat], [11.0 * zbar])
    load = LoadSpec("D1", [dbar], [dhat])
    return SystemInstance(1, [gen], [pv], [load], [0.0], UncertaintyBudget([1.0], [1.0]))

class TestValidateInstance(unittest.TestCase):
    def test_random_passes(self):
        for seed in range(5):
            report = validate_instance(random_instance(seed))
            self.assertTrue(report.passed, str(report))

    def test_fixture_passes(self):
        self.assertTrue(validate_instance(asymmetric_pv_instance()).passed)

    def test_pmin_above_pmax(self):
        inst = random_instance(0, n_g=3)
        bad = dataclasses.replace(inst.generators[1], p_min=50.0, p_max=40.0)
        inst = dataclasses.replace(inst, generators=(inst.generators[0], bad, inst.generators[2]))
        report = validate_instance(inst)
        self.assertFalse(report.passed)
        self.assertEqual(report.violations[0][0], "generators[1].p_min")

    def test_mutations_fail(self):
        inst = _one_slot_instance()
        self.assertTrue(validate_instance(inst).passed)
        gen = inst.generators[0]
        mutants = [
            dataclasses.replace(inst, generators=[dataclasses.replace(gen, ramp_up=-1.0)]),
            dataclasses.replace(inst, generators=[dataclasses.replace(gen, initial_on=0, initial_output=5.0)]),
            dataclasses.replace(inst, generators=[dataclasses.replace(gen, initial_output=200.0, initial_on=1)]),
            dataclasses.replace(inst, pvs=[PVSpec("PV1", [5.0], [6.0], [0.0])]),
            dataclasses.replace(inst, pvs=[PVSpec("PV1", [5.0], [1.0], [-1.0])]),
            dataclasses.replace(inst, loads=[LoadSpec("D1", [1.0], [2.0])]),
            dataclasses.replace(inst, budgets=UncertaintyBudget([2.0], [0.0])),
            dataclasses.replace(inst, budgets=UncertaintyBudget([0.0], [-0.5])),
            dataclasses.replace(inst, system_reserve=[0.0, 1.0]),
            dataclasses.replace(inst, pvs=[]),
        ]
        for mutant in mutants:
            self.assertFalse(validate_instance(mutant).passed)

    def test_coefficient_deviations_pass(self):
        inst = random_instance(3, coeff=0.2)
        np.testing.assert_allclose(inst.pv_deviation, 0.2 * inst.pv_expected)
        self.assertTrue(validate_instance(inst).passed)

    def test_check_shapes(self):
        inst = dataclasses.replace(_one_slot_instance(), system_reserve=[0.0, 0.0])
        with self.assertRaises(ValueError):
            inst.check_shapes()

class TestApplyUncertainty(unittest.TestCase):
    def test_zero_deviation(self):
        inst = random_instance(1)
        scen = apply_uncertainty(inst, UncertaintyRealization.nominal(inst))
        np.testing.assert_array_equal(scen.demand, inst.load_expected)
        np.testing.assert_array_equal(scen.pv, inst.pv_expected)

    def test_full_curtailment(self):
        inst = random_instance(1)
        real = UncertaintyRealization(np.zeros((2, 2)), np.ones((2, 2)))
        scen = apply_uncertainty(inst, real, np.ones((2, 2)))
        np.testing.assert_array_equal(scen.pv, np.zeros((2, 2)))

    def test_arithmetic(self):
        inst = _one_slot_instance()
        scen = apply_uncertainty(inst, UncertaintyRealization([[1.0]], [[1.0]]), [[0]])
        self.assertAlmostEqual(scen.demand[0, 0], 12.0)
        self.assertAlmostEqual(scen.pv[0, 0], 4.0)

    def test_monotone(self):
        inst = random_instance(4)
        low = apply_uncertainty(inst, UncertaintyRealization([[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]))
        high = apply_uncertainty(inst, UncertaintyRealization([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]))
        self.assertTrue(np.all(high.demand >= low.demand))
        self.assertTrue(np.all(high.pv <= low.pv))
        self.assertTrue(np.all(high.pv >= 0.0))

    def test_dimension_mismatch(self):
        inst = random_instance(1)
        with self.assertRaises(ValueError):
            apply_uncertainty(inst, UncertaintyRealization(np.zeros((3, 2)), np.zeros((2, 2))))

    def test_budget(self):
        inst = random_instance(2, delta=1.0, gamma=0.0)
        self.assertTrue(UncertaintyRealization([[1.0, 0.0], [0.0, 1.0]], np.zeros((2, 2))).within_budget(inst))
        self.assertFalse(UncertaintyRealization([[1.0, 0.0], [1.0, 0.0]], np.zeros((2, 2))).within_budget(inst))
        self.assertFalse(UncertaintyRealization(np.zeros((2, 2)), [[1.0, 0.0], [0.0, 0.0]]).within_budget(inst))

if __name__ == "__main__":
    unittest.main()
