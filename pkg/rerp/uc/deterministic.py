import logging
from dataclasses import dataclass
import numpy as np

from rerp.milp.model import ModelBuilder, SolverConfig, Status, check_feasible
from rerp.milp.solve import solve
from rerp.model.plan import CommitmentPlan, DispatchPlan
from rerp.uc.rows import (declare_commitment, add_commitment_rows, declare_dispatch, declare_balance_slack,
        add_dispatch_rows, add_fairness_rows, l1_coefficients, realized_arrays)
from rerp.uc.dispatch import DispatchInfeasibleError, first_slack_slot

logger = logging.getLogger(__name__)

@dataclass(frozen=True, eq=False)
class UcVariableMap:
    on: np.ndarray
    start: np.ndarray
    stop: np.ndarray
    curtail: np.ndarray
    production: np.ndarray
    reserve: np.ndarray
    dev_plus: np.ndarray = None
    dev_minus: np.ndarray = None
    shortage: np.ndarray = None
    surplus: np.ndarray = None

    def all_ids(self):
        parts = [self.on, self.start, self.stop, self.curtail, self.production, self.reserve,
                self.dev_plus, self.dev_minus, self.shortage, self.surplus]
        return np.concatenate([np.ravel(p) for p in parts if p is not None])

@dataclass(frozen=True, eq=False)
class UcSolution:
    commitment: CommitmentPlan
    dispatch: DispatchPlan
    dev_plus: np.ndarray
    dev_minus: np.ndarray
    total_cost: float
    breakdown: dict

def build_deterministic(instance, scenario=None, chi=0.0, elastic_penalty=None):
    '''Deterministic UC MILP for one scenario (nominal when scenario is
    None). chi > 0 adds the per-PV deviation split and its penalty.
    '''
    if chi < 0:
        raise ValueError("chi must be >= 0, got {}".format(chi))
    instance.check_shapes()
    demand, pv_avail = realized_arrays(instance, scenario)

    mb = ModelBuilder("uc_{}".format(instance.name))
    on, start, stop, curtail = declare_commitment(mb, instance)
    prod, res = declare_dispatch(mb, instance)
    shortage = surplus = None
    if elastic_penalty is not None:
        shortage, surplus = declare_balance_slack(mb, instance, elastic_penalty)

    add_commitment_rows(mb, instance, on, start, stop)
    add_dispatch_rows(mb, instance, prod, res, demand, pv_avail, on=on, curtail=curtail,
            shortage=shortage, surplus=surplus)
    dev_plus = dev_minus = None
    if chi > 0 and instance.n_p > 0:
        dev_plus, dev_minus = add_fairness_rows(mb, instance, curtail, pv_avail, chi)

    varmap = UcVariableMap(on, start, stop, curtail, prod, res, dev_plus, dev_minus, shortage, surplus)
    return mb.build(), varmap

def deviations(pv_avail, curtail):
    '''Mean-minus-own delivered energy per PV for a fixed curtailment.'''
    if pv_avail.shape[0] == 0:
        return np.zeros(0)
    coef = l1_coefficients(pv_avail)
    return np.einsum("jlt,lt->j", coef, 1.0 - np.asarray(curtail, dtype=np.float64))

def solve_deterministic(instance, scenario=None, chi=0.0, config=None):
    if config is None:
        config = SolverConfig()
    model, vm = build_deterministic(instance, scenario, chi)
    sol = solve(model, config)
    if sol.status == Status.INFEASIBLE:
        raise DispatchInfeasibleError(_infeasible_slot(instance, scenario, chi, config),
                "deterministic UC for {} is infeasible".format(instance.name))
    if sol.status != Status.OPTIMAL:
        raise RuntimeError("deterministic UC for {} ended with status {}".format(instance.name, sol.status.value))

    violations = check_feasible(model, sol.x, tol=1e-5)
    if len(violations) > 0:
        raise RuntimeError("solver returned an infeasible assignment: {}".format(violations[0]))

    plan = CommitmentPlan(sol.values(vm.on), sol.values(vm.start), sol.values(vm.stop), sol.values(vm.curtail))
    dispatch = DispatchPlan(sol.values(vm.production), sol.values(vm.reserve))
    _, pv_avail = realized_arrays(instance, scenario)
    dev = deviations(pv_avail, plan.curtail)
    if vm.dev_plus is not None:
        split = sol.values(vm.dev_plus) - sol.values(vm.dev_minus)
        if not np.allclose(split, dev, atol=1e-6):
            raise RuntimeError("deviation split does not match the curtailment plan")
    # closed-form re-minimization of the split
    dev_plus, dev_minus = np.maximum(dev, 0.0), np.maximum(-dev, 0.0)

    breakdown = {
        "commitment": plan.commitment_cost(instance),
        "dispatch": dispatch.fuel_cost(instance),
        "curtailment": plan.curtailment_cost(instance),
        "fairness": float(chi * np.sum(dev_plus + dev_minus)) if chi > 0 else 0.0,
    }
    total = sum(breakdown.values())
    logger.info("%s: deterministic cost %.6g (chi=%g)", instance.name, total, chi)
    return UcSolution(plan, DispatchPlan(dispatch.production, dispatch.reserve, breakdown["dispatch"]),
            dev_plus, dev_minus, total, breakdown)

def _infeasible_slot(instance, scenario, chi, config):
    penalty = 10.0 * max(1.0, float(np.max(instance.marginal_cost)) if instance.n_g > 0 else 1.0)
    model, vm = build_deterministic(instance, scenario, chi, elastic_penalty=penalty)
    sol = solve(model, config)
    if sol.status != Status.OPTIMAL:
        return None
    return first_slack_slot(sol.values(vm.shortage), sol.values(vm.surplus))
