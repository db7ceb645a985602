'''Second-stage dispatch LP: production and reserve for a fixed commitment
plan under one realization of the uncertain demand and PV output.

With an elastic penalty every balance row gets a shortage and a surplus
variable priced at that penalty. The elastic LP is the primal of the
recourse dual whose balance duals are capped at the same value, so its
optimal value is what the worst-case search evaluates.
'''
import logging
from dataclasses import dataclass
import numpy as np

from rerp.milp.model import ModelBuilder, SolverConfig, Status
from rerp.milp.solve import solve
from rerp.model.plan import DispatchPlan
from rerp.uc.rows import declare_dispatch, declare_balance_slack, add_dispatch_rows, realized_arrays

logger = logging.getLogger(__name__)

_SLACK_TOL = 1e-6

class DispatchInfeasibleError(RuntimeError):
    def __init__(self, slot, message):
        self.slot = slot
        if slot is not None:
            message = "{} (first balance violation at slot {})".format(message, slot)
        super(DispatchInfeasibleError, self).__init__(message)

@dataclass(frozen=True, eq=False)
class DispatchVariableMap:
    production: np.ndarray
    reserve: np.ndarray
    shortage: np.ndarray = None
    surplus: np.ndarray = None

def first_slack_slot(shortage, surplus):
    '''1-based slot of the first nonzero balance slack, or None.'''
    used = np.where((np.asarray(shortage) > _SLACK_TOL) | (np.asarray(surplus) > _SLACK_TOL))[0]
    if len(used) == 0:
        return None
    return int(used[0]) + 1

def build_dispatch(instance, plan, realization=None, elastic_penalty=None):
    instance.check_shapes()
    if plan.on.shape != (instance.n_g, instance.horizon) or plan.curtail.shape != (instance.n_p, instance.horizon):
        raise ValueError("plan dimensions do not match instance {}".format(instance.name))
    demand, pv_avail = realized_arrays(instance, realization)

    mb = ModelBuilder("dispatch_{}".format(instance.name))
    prod, res = declare_dispatch(mb, instance)
    shortage = surplus = None
    if elastic_penalty is not None:
        shortage, surplus = declare_balance_slack(mb, instance, elastic_penalty)
    add_dispatch_rows(mb, instance, prod, res, demand, pv_avail, on_values=plan.on,
            curtail_values=plan.curtail, shortage=shortage, surplus=surplus)
    return mb.build(), DispatchVariableMap(prod, res, shortage, surplus)

def dispatch_value(instance, plan, realization=None, elastic_penalty=None, config=None):
    '''Optimal dispatch cost, or None when the LP is infeasible.'''
    model, _ = build_dispatch(instance, plan, realization, elastic_penalty)
    sol = solve(model, config or SolverConfig())
    if sol.status != Status.OPTIMAL:
        return None
    return sol.objective

def solve_dispatch(instance, plan, realization=None, config=None):
    '''Optimal DispatchPlan for the plan under the realization. Raises
    DispatchInfeasibleError naming the first slot whose balance cannot be met.
    '''
    if config is None:
        config = SolverConfig()
    model, vm = build_dispatch(instance, plan, realization)
    sol = solve(model, config)
    if sol.status == Status.OPTIMAL:
        return DispatchPlan(sol.values(vm.production), sol.values(vm.reserve), sol.objective)
    if sol.status != Status.INFEASIBLE:
        raise RuntimeError("dispatch LP ended with status {}".format(sol.status.value))

    penalty = 10.0 * max(1.0, float(np.max(instance.marginal_cost)) if instance.n_g > 0 else 1.0)
    model, vm = build_dispatch(instance, plan, realization, elastic_penalty=penalty)
    elastic = solve(model, config)
    slot = None
    if elastic.status == Status.OPTIMAL:
        slot = first_slack_slot(elastic.values(vm.shortage), elastic.values(vm.surplus))
    logger.debug("%s: dispatch infeasible, first slack slot %s", instance.name, slot)
    raise DispatchInfeasibleError(slot, "dispatch for {} is infeasible".format(instance.name))
