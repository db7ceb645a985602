'''Benders decomposition for the robust unit commitment with fair PV
curtailment.

Each iteration solves the master for a plan, evaluates its worst-case
recourse and adds the optimality cut

    w >= constant + coef_on . x + coef_curtail . r

built from the recourse solution: the dual terms of the dispatch LP are
affine in (x, r) at fixed duals and worst case, and the fairness term is
replaced by an affine lower bound in r that is exact at the generating
curtailment.
'''
import logging
import time
from dataclasses import dataclass, field
import numpy as np
import pandas as pd

from rerp.milp.model import SolverConfig, Status
from rerp.milp.solve import solve, solver_config
from rerp.uc.dispatch import solve_dispatch, DispatchInfeasibleError
from rerp.uc.rows import l1_coefficients
from rerp.robust.recourse import BigMConfig, solve_recourse, OPERATOR, PENALTY_SENSES
from rerp.robust.master import build_master, w_floor

logger = logging.getLogger(__name__)

CONVERGED = "Converged"
ITERATION_LIMIT = "IterationLimit"

_SIGNATURE_DIGITS = 7

@dataclass(frozen=True)
class BendersConfig:
    epsilon: float = 1e-3
    max_iterations: int = 30
    chi: float = 100.0
    bigm: BigMConfig = None
    bigm_factor: float = 10.0
    penalty_sense: str = OPERATOR
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.chi < 0:
            raise ValueError("chi must be >= 0")
        if self.penalty_sense not in PENALTY_SENSES:
            raise ValueError("unknown penalty sense '{}'".format(self.penalty_sense))

    def bigm_for(self, instance):
        if self.bigm is not None:
            return self.bigm
        return BigMConfig.default(instance, self.bigm_factor)

def benders_config(gconf, **overrides):
    '''BendersConfig from the 'benders' and 'solver' sections of
    global_config.yaml; keyword overrides win.
    '''
    section = gconf.get("benders", {}) or {}
    values = dict(epsilon=float(section.get("epsilon", 1e-3)),
            max_iterations=int(section.get("max_iterations", 30)),
            chi=float(section.get("chi", 100.0)),
            bigm_factor=float(section.get("bigm_factor", 10.0)),
            penalty_sense=section.get("penalty_sense", OPERATOR),
            solver=solver_config(gconf))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return BendersConfig(**values)

@dataclass(frozen=True, eq=False)
class Cut:
    constant: float
    coef_on: np.ndarray
    coef_curtail: np.ndarray
    iteration: int
    realization: object
    signature: bytes

    def rhs(self, plan):
        return float(self.constant + np.sum(self.coef_on * plan.on) + np.sum(self.coef_curtail * plan.curtail))

def _rounded(values):
    return (np.round(np.asarray(values, dtype=np.float64), _SIGNATURE_DIGITS) + 0.0).tobytes()

def make_cut(instance, rec, iteration=0):
    '''Optimality cut from a recourse solution; tight at the plan that
    produced it.
    '''
    T = instance.horizon
    d = rec.duals
    zeta, eta = rec.worst_case.demand, rec.worst_case.pv
    alpha = d["alpha_plus"] - d["alpha_minus"]
    demand = (instance.load_expected + zeta * instance.load_deviation).sum(axis=0)
    pv = instance.pv_expected - eta * instance.pv_deviation

    # balance: (demand - sum_l (1 - r) pv) . alpha
    constant = float(np.dot(demand, alpha) - np.sum(pv * alpha[None, :]))
    coef_curtail = pv * alpha[None, :]
    coef_on = np.zeros((instance.n_g, T))
    for i, g in enumerate(instance.generators):
        b1, b2 = d["beta1"][i], d["beta2"][i]
        constant -= g.ramp_up * b1.sum() + g.initial_output * b1[0]
        constant += g.initial_output * b2[0] - g.ramp_down * b2.sum()
        constant -= g.p_max * d["kappa1"][i].sum()
        constant -= float(np.dot(instance.reserve_cap[i], d["omega"][i]))
        coef_on[i] = g.p_min * (d["kappa2"][i] + d["lambda2"][i]) - g.p_max * d["lambda1"][i]
    constant += float(np.dot(instance.system_reserve, d["iota"]))

    if rec.chi > 0 and instance.n_p > 0:
        c = l1_coefficients(pv)
        r_k = rec.plan.curtail.astype(np.float64)
        dev = np.einsum("jlt,lt->j", c, 1.0 - r_k)
        if rec.penalty_sense == OPERATOR:
            sign = np.where(dev >= 0.0, 1.0, -1.0)
            constant += rec.chi * float(np.dot(sign, c.sum(axis=(1, 2))))
            coef_curtail = coef_curtail - rec.chi * np.einsum("j,jlt->lt", sign, c)
        else:
            size = np.abs(c)
            # |r - r_k| = r_k + (1 - 2 r_k) r on binaries
            constant -= rec.chi * float(np.abs(dev).sum() + np.einsum("jlt,lt->", size, r_k))
            coef_curtail = coef_curtail - rec.chi * np.einsum("jlt,lt->lt", size, 1.0 - 2.0 * r_k)

    # equal signatures mean equal cut rows
    signature = b"|".join([_rounded(constant), _rounded(coef_on), _rounded(coef_curtail)])
    return Cut(constant, coef_on, coef_curtail, iteration, rec.worst_case, signature)

@dataclass(frozen=True)
class BendersIteration:
    iteration: int
    lower: float
    upper: float
    best_upper: float
    gap: float
    cuts: int
    wall_time: float

@dataclass(eq=False)
class BendersTrace:
    iterations: list = field(default_factory=list)
    status: str = None

    _COLUMNS = ("iteration", "lower", "upper", "best_upper", "gap", "cuts", "wall_time")

    def to_frame(self):
        return pd.DataFrame([[getattr(it, c) for c in self._COLUMNS] for it in self.iterations],
                columns=list(self._COLUMNS))

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False)

    @property
    def lower(self):
        return self.iterations[-1].lower if self.iterations else -np.inf

    @property
    def best_upper(self):
        return self.iterations[-1].best_upper if self.iterations else np.inf

@dataclass(frozen=True, eq=False)
class RobustResult:
    commitment: object
    value: float
    first_stage_cost: float
    trace: BendersTrace
    worst_case: object
    dispatch: object
    recourse: object

    @property
    def converged(self):
        return self.trace.status == CONVERGED

    @property
    def status(self):
        return self.trace.status

    @property
    def uses_slack(self):
        return self.recourse.uses_slack

def relative_gap(lower, best_upper):
    scale = abs(best_upper)
    if scale < 1e-9:
        return best_upper - lower
    return (best_upper - lower) / scale

def final_dispatch(instance, plan, realization, config=None):
    '''Optimal dispatch of the plan under the realization; raises
    DispatchInfeasibleError naming the first short slot.
    '''
    return solve_dispatch(instance, plan, realization, config)

def solve_robust(instance, config=None):
    if config is None:
        config = BendersConfig()
    bigm = config.bigm_for(instance)
    floor = w_floor(instance, config.chi, config.penalty_sense)

    cuts, seen = [], set()
    trace = BendersTrace()
    lower, best = -np.inf, (np.inf, None, None)
    started = time.perf_counter()
    for k in range(1, config.max_iterations + 1):
        model, vm = build_master(instance, cuts, floor)
        sol = solve(model, config.solver)
        if sol.status != Status.OPTIMAL:
            raise RuntimeError("master problem for {} ended with status {}".format(instance.name, sol.status.value))
        bound = sol.bound if sol.bound is not None and np.isfinite(sol.bound) else sol.objective
        lower = max(lower, bound)

        plan = vm.plan(sol)
        first = plan.commitment_cost(instance) + plan.curtailment_cost(instance)
        rec = solve_recourse(instance, plan, config.chi, bigm, config.solver, config.penalty_sense)
        upper = first + rec.value
        if upper < best[0]:
            best = (upper, plan, rec)
        gap = relative_gap(lower, best[0])

        cut = make_cut(instance, rec, k)
        repeated = cut.signature in seen
        if not repeated:
            seen.add(cut.signature)
            cuts.append(cut)
        trace.iterations.append(BendersIteration(k, lower, upper, best[0], gap, len(cuts),
                time.perf_counter() - started))
        logger.info("%s iteration %d: lower %.6g upper %.6g best %.6g gap %.3g", instance.name, k,
                lower, upper, best[0], gap)
        if gap < config.epsilon:
            trace.status = CONVERGED
            break
        if repeated:
            # the master would return the same plan again
            trace.status = ITERATION_LIMIT
            logger.warning("%s: cut repeated at iteration %d with gap %.3g; tighten the solver mip_gap",
                    instance.name, k, gap)
            break
    else:
        trace.status = ITERATION_LIMIT
        logger.warning("%s: iteration limit %d reached with gap %.3g", instance.name, config.max_iterations,
                trace.iterations[-1].gap)

    value, plan, rec = best
    if rec.uses_slack:
        logger.warning("%s: the robust plan cannot serve its worst case without balance slack (slot %d); "
                "the value includes shortage priced at theta_m=%g", instance.name, rec.slack_slot, rec.theta_m)
    dispatch = None
    try:
        dispatch = final_dispatch(instance, plan, rec.worst_case, config.solver)
    except DispatchInfeasibleError as err:
        logger.warning("%s: worst-case dispatch needs balance slack: %s", instance.name, err)
    return RobustResult(plan, value, plan.commitment_cost(instance) + plan.curtailment_cost(instance), trace,
            rec.worst_case, dispatch, rec)
