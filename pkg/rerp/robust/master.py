'''Benders master: first-stage commitment and curtailment plus an epigraph
variable w for the worst-case recourse, cut off from below by every cut
collected so far.
'''
from dataclasses import dataclass
import numpy as np

from rerp.milp.model import ModelBuilder, GE, check_feasible
from rerp.model.plan import CommitmentPlan
from rerp.uc.rows import declare_commitment, add_commitment_rows
from rerp.robust.recourse import OPERATOR

@dataclass(frozen=True, eq=False)
class MasterVariableMap:
    on: np.ndarray
    start: np.ndarray
    stop: np.ndarray
    curtail: np.ndarray
    w: int

    def plan(self, sol):
        return CommitmentPlan(sol.values(self.on), sol.values(self.start), sol.values(self.stop),
                sol.values(self.curtail))

    def assignment(self, plan, num_vars, w=0.0):
        x = np.zeros(num_vars)
        for ids, values in ((self.on, plan.on), (self.start, plan.start), (self.stop, plan.stop),
                (self.curtail, plan.curtail)):
            x[np.asarray(ids, dtype=int).ravel()] = np.asarray(values, dtype=np.float64).ravel()
        x[self.w] = w
        return x

def w_floor(instance, chi, penalty_sense=OPERATOR):
    '''Lower bound on the recourse: 0, or -chi * 2 * sum(zbar) when the
    fairness term is subtracted.
    '''
    if penalty_sense == OPERATOR:
        return 0.0
    return -2.0 * chi * float(instance.pv_expected.sum())

def build_master(instance, cuts, floor=0.0):
    instance.check_shapes()
    mb = ModelBuilder("master_{}".format(instance.name))
    on, start, stop, curtail = declare_commitment(mb, instance)
    w = mb.add_var("w", lb=floor, obj=1.0)
    add_commitment_rows(mb, instance, on, start, stop)

    for k, cut in enumerate(cuts):
        terms = [(w, 1.0)]
        terms += [(vid, -coef) for vid, coef in zip(on.ravel(), cut.coef_on.ravel())]
        terms += [(vid, -coef) for vid, coef in zip(curtail.ravel(), cut.coef_curtail.ravel())]
        mb.add_row("cut[{}]".format(k + 1), terms, GE, cut.constant)
    return mb.build(), MasterVariableMap(on, start, stop, curtail, w)

def master_violations(instance, plan):
    '''Rows, bounds and integrality of a cut-free master that the plan
    breaks; empty for a plan the master could have returned.
    '''
    model, vm = build_master(instance, [])
    return check_feasible(model, vm.assignment(plan, model.num_vars))
