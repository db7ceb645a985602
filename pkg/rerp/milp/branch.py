import time
import logging
import numpy as np

from rerp.milp.model import MAXIMIZE, MilpSolution, Status
from rerp.milp.simplex import solve_lp

logger = logging.getLogger(__name__)

_INT_TOL = 1e-6

class _Node(object):
    __slots__ = ("lb", "ub", "bound", "depth", "seq")

    def __init__(self, lb, ub, bound, depth, seq):
        self.lb = lb
        self.ub = ub
        self.bound = bound
        self.depth = depth
        self.seq = seq

def _select(open_nodes, have_incumbent):
    '''Depth-first dive until an incumbent exists, best bound afterwards.'''
    if not have_incumbent:
        key = lambda k: (-open_nodes[k].depth, -open_nodes[k].seq)
    else:
        key = lambda k: (open_nodes[k].bound, -open_nodes[k].depth, open_nodes[k].seq)
    k = min(range(len(open_nodes)), key=key)
    return open_nodes.pop(k)

def _branch_var(x, binary_ids):
    '''Most fractional binary, lowest id on ties; None if x is integral.'''
    frac = x[binary_ids] - np.floor(x[binary_ids])
    dist = np.minimum(frac, 1.0 - frac)
    if len(dist) == 0 or dist.max() <= _INT_TOL:
        return None
    return int(binary_ids[np.argmax(dist)])

def _within_gap(bound, incumbent, mip_gap):
    return bound >= incumbent - max(mip_gap * abs(incumbent), 1e-9)

def branch_and_bound(model, config):
    '''Solve a MilpModel with LP-based branch-and-bound over its binaries.

    Integral node solutions are polished: binaries are rounded and fixed and
    the continuous part is re-solved, so a returned Optimal assignment passes
    check_feasible() with exactly integral binaries.
    '''
    sign = -1.0 if model.sense == MAXIMIZE else 1.0
    c = sign * np.asarray(model.c)
    A = model.A.toarray()
    senses, rhs = model.senses, np.asarray(model.rhs)
    binary_ids = np.where(model.binary)[0]
    start = time.time()

    def relax(lb, ub):
        return solve_lp(c, A, senses, rhs, lb, ub)

    incumbent, inc_val = None, np.inf
    iterations = 0
    nodes = 0
    seq = 0
    open_nodes = [_Node(np.array(model.lb, dtype=np.float64), np.array(model.ub, dtype=np.float64), -np.inf, 0, seq)]
    limited = False
    pruned_bound = np.inf

    while len(open_nodes) > 0:
        if nodes >= config.node_limit or \
                (config.time_limit is not None and time.time() - start > config.time_limit):
            limited = True
            break
        node = _select(open_nodes, incumbent is not None)
        if incumbent is not None and _within_gap(node.bound, inc_val, config.mip_gap):
            pruned_bound = min(pruned_bound, node.bound)
            continue

        res = relax(node.lb, node.ub)
        nodes += 1
        iterations += res.iterations
        if res.status == Status.INFEASIBLE:
            continue
        if res.status == Status.UNBOUNDED:
            if nodes == 1:
                return MilpSolution(Status.UNBOUNDED, nodes=nodes, iterations=iterations)
            continue
        if res.status == Status.ITERATION_LIMIT:
            logger.warning("LP iteration limit at node %d; node dropped", nodes)
            limited = True
            pruned_bound = min(pruned_bound, node.bound)
            continue
        if incumbent is not None and _within_gap(res.objective, inc_val, config.mip_gap):
            pruned_bound = min(pruned_bound, res.objective)
            continue

        j = _branch_var(res.x, binary_ids)
        if j is None:
            lb, ub = node.lb.copy(), node.ub.copy()
            fixed = np.round(res.x[binary_ids])
            lb[binary_ids] = fixed
            ub[binary_ids] = fixed
            polished = relax(lb, ub)
            iterations += polished.iterations
            if polished.status == Status.OPTIMAL and polished.objective < inc_val:
                incumbent, inc_val = polished.x, polished.objective
                logger.debug("node %d: incumbent %g", nodes, sign * inc_val)
            continue

        for branch in (0.0, 1.0):
            lb, ub = node.lb.copy(), node.ub.copy()
            lb[j] = ub[j] = branch
            seq += 1
            open_nodes.append(_Node(lb, ub, res.objective, node.depth + 1, seq))

    if incumbent is None:
        status = Status.ITERATION_LIMIT if limited else Status.INFEASIBLE
        return MilpSolution(status, nodes=nodes, iterations=iterations)

    bound = min([n.bound for n in open_nodes] + [inc_val, pruned_bound])
    gap = (inc_val - bound) / max(abs(inc_val), 1e-10)
    status = Status.OPTIMAL if not limited or gap <= config.mip_gap else Status.ITERATION_LIMIT
    x = incumbent.copy()
    x[binary_ids] = np.round(x[binary_ids])
    objective = model.objective_value(x)
    return MilpSolution(status, objective, x, gap=gap, bound=sign * bound + model.obj_const,
            nodes=nodes, iterations=iterations)
