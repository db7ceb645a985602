import logging
import numpy as np
from scipy.optimize import milp, LinearConstraint, Bounds

from rerp.milp.model import LE, GE, MAXIMIZE, MilpSolution, SolverConfig, Status, check_feasible
from rerp.milp.branch import branch_and_bound

logger = logging.getLogger(__name__)

_SCIPY_STATUS = {0: Status.OPTIMAL, 1: Status.ITERATION_LIMIT, 2: Status.INFEASIBLE,
        3: Status.UNBOUNDED}

def solver_config(gconf):
    '''SolverConfig from the 'solver' section of global_config.yaml.'''
    section = gconf.get("solver", {}) or {}
    return SolverConfig(mip_gap=float(section.get("mip_gap", 1e-4)),
            feasibility_tol=float(section.get("feasibility_tol", 1e-6)),
            node_limit=int(section.get("node_limit", 200000)),
            time_limit=section.get("time_limit"),
            backend=section.get("backend", "bundled"))

def _row_limits(model):
    lo = np.full(model.num_rows, -np.inf)
    hi = np.full(model.num_rows, np.inf)
    for i, s in enumerate(model.senses):
        if s != GE:
            hi[i] = model.rhs[i]
        if s != LE:
            lo[i] = model.rhs[i]
    return lo, hi

def _scipy_milp(model, lb, ub, integrality, config):
    sign = -1.0 if model.sense == MAXIMIZE else 1.0
    constraints = None
    if model.num_rows > 0:
        lo, hi = _row_limits(model)
        constraints = LinearConstraint(model.A, lo, hi)
    options = {"disp": False, "mip_rel_gap": config.mip_gap, "node_limit": config.node_limit}
    if config.time_limit is not None:
        options["time_limit"] = config.time_limit
    return milp(sign * np.asarray(model.c), integrality=integrality, bounds=Bounds(lb, ub),
            constraints=constraints, options=options)

def _solve_scipy(model, config):
    sign = -1.0 if model.sense == MAXIMIZE else 1.0
    integrality = model.binary.astype(int)
    res = _scipy_milp(model, model.lb, model.ub, integrality, config)
    status = _SCIPY_STATUS.get(res.status, Status.ITERATION_LIMIT)
    if res.x is None:
        if status == Status.OPTIMAL:
            status = Status.ITERATION_LIMIT
        return MilpSolution(status)

    x = np.array(res.x)
    if model.num_binaries > 0:
        # re-solve with rounded binaries fixed so they are exactly 0 or 1
        fixed = np.round(x[model.binary])
        lb, ub = np.array(model.lb), np.array(model.ub)
        lb[model.binary] = fixed
        ub[model.binary] = fixed
        polished = _scipy_milp(model, lb, ub, np.zeros(model.num_vars, dtype=int), config)
        if polished.x is not None and polished.status == 0:
            x = np.array(polished.x)
            x[model.binary] = fixed

    objective = model.objective_value(x)
    bound = getattr(res, "mip_dual_bound", None)
    if bound is None or not np.isfinite(bound):
        bound = objective
    else:
        bound = sign * bound + model.obj_const
    gap = getattr(res, "mip_gap", None)
    gap = 0.0 if gap is None else float(gap)
    return MilpSolution(status, objective, x, gap=gap, bound=float(bound),
            nodes=int(getattr(res, "mip_node_count", 0) or 0))

def solve(model, config=None):
    '''Solve a MilpModel with the backend named in config (bundled
    branch-and-bound by default, or scipy's HiGHS interface).
    '''
    if config is None:
        config = SolverConfig()
    logger.debug("solving %s: %d vars (%d binary), %d rows with %s backend", model.name,
            model.num_vars, model.num_binaries, model.num_rows, config.backend)

    if config.backend == "scipy":
        sol = _solve_scipy(model, config)
    else:
        sol = branch_and_bound(model, config)

    if sol.status == Status.OPTIMAL:
        violations = check_feasible(model, sol.x, tol=max(config.feasibility_tol, 1e-5))
        if len(violations) > 0:
            logger.warning("%s: solution violates %d constraints (worst %s by %g)", model.name,
                    len(violations), violations[0].name, max(v.magnitude for v in violations))
    logger.debug("%s: %s objective=%s nodes=%d", model.name, sol.status.value, sol.objective, sol.nodes)
    return sol
