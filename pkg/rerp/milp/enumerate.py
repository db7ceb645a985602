'''Brute-force reference solver for small MILPs: every binary assignment is
fixed in turn and the remaining LP is solved with the scipy backend. Used
by the tests to cross-check branch-and-bound.
'''
import itertools
import numpy as np

from rerp.milp.model import MAXIMIZE, MilpSolution, SolverConfig, Status
from rerp.milp.solve import _scipy_milp

MAX_BINARIES = 16

def enumerate_solve(model):
    binary_ids = np.where(model.binary)[0]
    if len(binary_ids) > MAX_BINARIES:
        raise ValueError("enumeration limited to {} binaries, model has {}".format(MAX_BINARIES, len(binary_ids)))

    config = SolverConfig(backend="scipy")
    better = (lambda a, b: a > b) if model.sense == MAXIMIZE else (lambda a, b: a < b)
    best = None
    unbounded = False
    integrality = np.zeros(model.num_vars, dtype=int)
    for values in itertools.product((0.0, 1.0), repeat=len(binary_ids)):
        lb, ub = np.array(model.lb), np.array(model.ub)
        lb[binary_ids] = values
        ub[binary_ids] = values
        if np.any(lb > ub):
            continue
        res = _scipy_milp(model, lb, ub, integrality, config)
        if res.status == 3:
            unbounded = True
            continue
        if res.status != 0:
            continue
        x = np.array(res.x)
        x[binary_ids] = values
        objective = model.objective_value(x)
        if best is None or better(objective, best.objective):
            best = MilpSolution(Status.OPTIMAL, objective, x, gap=0.0, bound=objective)

    if unbounded:
        return MilpSolution(Status.UNBOUNDED)
    if best is None:
        return MilpSolution(Status.INFEASIBLE)
    return best

def random_milp(seed, n_binary=6, n_continuous=3, n_rows=5, sense="min"):
    '''Random feasible, bounded MILP with a known feasible point; rows are
    a mix of <= and >= constraints.
    '''
    from rerp.milp.model import ModelBuilder, LE, GE

    rng = np.random.default_rng(seed)
    mb = ModelBuilder("random{}".format(seed), sense=sense)
    ids = [mb.add_binary("b{}".format(k), obj=rng.uniform(-5.0, 5.0)) for k in range(n_binary)]
    ids += [mb.add_var("y{}".format(k), 0.0, 10.0, obj=rng.uniform(-3.0, 3.0)) for k in range(n_continuous)]
    x0 = np.concatenate([rng.integers(0, 2, size=n_binary), rng.uniform(0.0, 10.0, size=n_continuous)])
    for i in range(n_rows):
        coefs = rng.uniform(-4.0, 4.0, size=len(ids))
        act = float(coefs.dot(x0))
        if i % 2 == 0:
            mb.add_row("r{}".format(i), zip(ids, coefs), LE, act + rng.uniform(0.0, 2.0))
        else:
            mb.add_row("r{}".format(i), zip(ids, coefs), GE, act - rng.uniform(0.0, 2.0))
    return mb.build()
