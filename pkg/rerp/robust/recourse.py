'''Worst-case recourse R(x) for a fixed commitment plan.

The dispatch LP is dualized and the uncertain demand (zeta) and PV (eta)
indicators become binaries of one maximization MILP; their products with
the balance duals alpha+/alpha- are linearized with big-M envelopes

    m <= theta * ind,  m <= alpha,  m >= alpha - theta * (1 - ind)

where theta caps the balance duals. Capping the duals is the same as
letting the balance rows of the dispatch LP go elastic at price theta, so
R(x) is finite for every plan that can satisfy the non-balance rows.

Two penalty senses are supported for the fairness term:

  operator   R = max [S(x, zeta, eta) + chi * L1]  (|D_j| via one binary per PV)
  adversary  R = max [S(x, zeta, eta) - chi * L1]

where D_j is PV j's mean-minus-own delivered energy and L1 = sum_j |D_j|.
'''
import logging
from dataclasses import dataclass
import numpy as np

from rerp.milp.model import ModelBuilder, SolverConfig, Status, LE, EQ, GE, MAXIMIZE
from rerp.milp.solve import solve
from rerp.model.instance import UncertaintyRealization
from rerp.uc.rows import l1_coefficients
from rerp.uc.dispatch import build_dispatch, first_slack_slot

logger = logging.getLogger(__name__)

OPERATOR, ADVERSARY = "operator", "adversary"
PENALTY_SENSES = (OPERATOR, ADVERSARY)

class RecourseUnboundedError(RuntimeError):
    pass

@dataclass(frozen=True)
class BigMConfig:
    theta_m: float

    def __post_init__(self):
        if not self.theta_m > 0:
            raise ValueError("theta_m must be positive")

    @classmethod
    def default(cls, instance, factor=10.0):
        return cls(factor * max(1.0, _max_marginal_cost(instance)))

    def check(self, instance):
        top = _max_marginal_cost(instance)
        if self.theta_m < top:
            raise ValueError("theta_m {} is below the largest marginal cost {}".format(self.theta_m, top))

def _max_marginal_cost(instance):
    if instance.n_g == 0:
        return 0.0
    return float(np.max(instance.marginal_cost))

@dataclass(frozen=True, eq=False)
class RecourseVariableMap:
    zeta: np.ndarray
    eta: np.ndarray
    alpha_plus: np.ndarray
    alpha_minus: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    iota: np.ndarray
    omega: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    m4: np.ndarray
    dev_plus: np.ndarray
    dev_minus: np.ndarray
    sign: np.ndarray = None

_DUALS = ("alpha_plus", "alpha_minus", "beta1", "beta2", "kappa1", "kappa2", "lambda1", "lambda2", "iota", "omega")
_PRODUCTS = ("m1", "m2", "m3", "m4")

@dataclass(frozen=True, eq=False)
class RecourseSolution:
    plan: object
    worst_case: UncertaintyRealization
    duals: dict
    products: dict
    dev_plus: np.ndarray
    dev_minus: np.ndarray
    value: float
    chi: float
    theta_m: float
    penalty_sense: str
    slack_slot: int = None

    @property
    def uses_slack(self):
        '''True when the worst-case dispatch only balances with shortage or
        surplus priced at theta_m; slack_slot is then the first such slot.
        '''
        return self.slack_slot is not None

    @property
    def l1(self):
        return float(np.sum(self.dev_plus + self.dev_minus))

    @property
    def dispatch_value(self):
        '''Worst-case dispatch cost S without the fairness term.'''
        if self.penalty_sense == OPERATOR:
            return self.value - self.chi * self.l1
        return self.value + self.chi * self.l1

def _ids(mb, prefix, shape, lb=0.0, ub=np.inf, binary=False):
    ids = np.empty(shape, dtype=int)
    for idx in np.ndindex(*shape):
        name = "{}[{}]".format(prefix, ",".join(str(k + 1) for k in idx))
        if binary:
            ids[idx] = mb.add_binary(name)
        else:
            ids[idx] = mb.add_var(name, lb, ub)
    return ids

def build_recourse(instance, plan, chi, bigm, penalty_sense=OPERATOR):
    '''Recourse maximization MILP for a fixed plan; returns
    (MilpModel, RecourseVariableMap).
    '''
    if chi < 0:
        raise ValueError("chi must be >= 0, got {}".format(chi))
    if penalty_sense not in PENALTY_SENSES:
        raise ValueError("unknown penalty sense '{}'".format(penalty_sense))
    instance.check_shapes()
    bigm.check(instance)
    problems = plan.violations(instance)
    if len(problems) > 0:
        raise ValueError("plan violates commitment logic: {}".format(problems[0]))

    T, n_g, n_p, n_d = instance.horizon, instance.n_g, instance.n_p, instance.n_d
    theta = bigm.theta_m
    x = plan.on.astype(np.float64)
    keep = 1.0 - plan.curtail.astype(np.float64)
    zbar, zhat = instance.pv_expected, instance.pv_deviation
    dbar, dhat = instance.load_expected, instance.load_deviation

    mb = ModelBuilder("recourse_{}".format(instance.name), sense=MAXIMIZE)
    zeta = _ids(mb, "zeta", (n_d, T), binary=True)
    eta = _ids(mb, "eta", (n_p, T), binary=True)
    a_plus = _ids(mb, "alpha+", (T,), 0.0, theta)
    a_minus = _ids(mb, "alpha-", (T,), 0.0, theta)
    beta1 = _ids(mb, "beta1", (n_g, T))
    beta2 = _ids(mb, "beta2", (n_g, T))
    kappa1 = _ids(mb, "kappa1", (n_g, T))
    kappa2 = _ids(mb, "kappa2", (n_g, T))
    lambda1 = _ids(mb, "lambda1", (n_g, T))
    lambda2 = _ids(mb, "lambda2", (n_g, T))
    iota = _ids(mb, "iota", (T,))
    omega = _ids(mb, "omega", (n_g, T))
    m1 = _ids(mb, "m1", (n_d, T))
    m2 = _ids(mb, "m2", (n_d, T))
    m3 = _ids(mb, "m3", (n_p, T))
    m4 = _ids(mb, "m4", (n_p, T))

    # dual objective of the dispatch LP
    for t in range(T):
        nominal = float(dbar[:, t].sum() - np.dot(keep[:, t], zbar[:, t]))
        mb.add_obj(a_plus[t], nominal)
        mb.add_obj(a_minus[t], -nominal)
        mb.add_obj(iota[t], float(instance.system_reserve[t]))
        for j in range(n_d):
            mb.add_obj(m1[j, t], float(dhat[j, t]))
            mb.add_obj(m2[j, t], -float(dhat[j, t]))
        for l in range(n_p):
            mb.add_obj(m3[l, t], keep[l, t] * float(zhat[l, t]))
            mb.add_obj(m4[l, t], -keep[l, t] * float(zhat[l, t]))
    for i, g in enumerate(instance.generators):
        for t in range(T):
            if t == 0:
                mb.add_obj(beta1[i, t], -(g.ramp_up + g.initial_output))
                mb.add_obj(beta2[i, t], g.initial_output - g.ramp_down)
            else:
                mb.add_obj(beta1[i, t], -g.ramp_up)
                mb.add_obj(beta2[i, t], -g.ramp_down)
            mb.add_obj(kappa1[i, t], -g.p_max)
            mb.add_obj(kappa2[i, t], g.p_min * x[i, t])
            mb.add_obj(lambda1[i, t], -g.p_max * x[i, t])
            mb.add_obj(lambda2[i, t], g.p_min * x[i, t])
            mb.add_obj(omega[i, t], -float(instance.reserve_cap[i, t]))

    # dual feasibility for p[i, t] and q[i, t]
    for i in range(n_g):
        for t in range(T):
            terms = [(a_plus[t], 1.0), (a_minus[t], -1.0), (beta1[i, t], -1.0), (beta2[i, t], 1.0),
                    (kappa1[i, t], -1.0), (kappa2[i, t], 1.0), (lambda1[i, t], -1.0), (lambda2[i, t], 1.0)]
            if t + 1 < T:
                terms += [(beta1[i, t+1], 1.0), (beta2[i, t+1], -1.0)]
            mb.add_row("dual_p[{},{}]".format(i, t+1), terms, LE, float(instance.marginal_cost[i, t]))
            mb.add_row("dual_q[{},{}]".format(i, t+1), [(kappa1[i, t], -1.0), (kappa2[i, t], 1.0),
                    (iota[t], 1.0), (omega[i, t], -1.0)], LE, 0.0)

    def envelope(label, prod, ind, dual):
        mb.add_row("{}_ind".format(label), [(prod, 1.0), (ind, -theta)], LE, 0.0)
        mb.add_row("{}_dual".format(label), [(prod, 1.0), (dual, -1.0)], LE, 0.0)
        mb.add_row("{}_low".format(label), [(prod, 1.0), (dual, -1.0), (ind, -theta)], GE, -theta)

    for t in range(T):
        for j in range(n_d):
            envelope("m1[{},{}]".format(j, t+1), m1[j, t], zeta[j, t], a_plus[t])
            envelope("m2[{},{}]".format(j, t+1), m2[j, t], zeta[j, t], a_minus[t])
        for l in range(n_p):
            envelope("m3[{},{}]".format(l, t+1), m3[l, t], eta[l, t], a_plus[t])
            envelope("m4[{},{}]".format(l, t+1), m4[l, t], eta[l, t], a_minus[t])
        if n_d > 0:
            mb.add_row("budget_demand[{}]".format(t+1), [(zeta[j, t], 1.0) for j in range(n_d)], LE,
                    float(instance.budgets.demand[t]))
        if n_p > 0:
            mb.add_row("budget_pv[{}]".format(t+1), [(eta[l, t], 1.0) for l in range(n_p)], LE,
                    float(instance.budgets.pv[t]))

    # deviation split; eta enters linearly since the curtailment is fixed
    dev_plus = np.empty(n_p, dtype=int)
    dev_minus = np.empty(n_p, dtype=int)
    sign = None
    obj = chi if penalty_sense == OPERATOR else -chi
    for j in range(n_p):
        dev_plus[j] = mb.add_var("a+[{}]".format(j), obj=obj)
        dev_minus[j] = mb.add_var("a-[{}]".format(j), obj=obj)
    if n_p > 0:
        weights = l1_coefficients(np.ones((n_p, T)))
        for j in range(n_p):
            terms = [(dev_plus[j], 1.0), (dev_minus[j], -1.0)]
            rhs = 0.0
            for l in range(n_p):
                for t in range(T):
                    w = weights[j, l, t] * keep[l, t]
                    rhs += w * float(zbar[l, t])
                    terms.append((eta[l, t], w * float(zhat[l, t])))
            mb.add_row("deviation[{}]".format(j), terms, EQ, rhs)

    if penalty_sense == OPERATOR and n_p > 0 and chi > 0:
        big = max(float(zbar.sum()), 1.0)
        sign = np.empty(n_p, dtype=int)
        for j in range(n_p):
            sign[j] = mb.add_binary("sigma[{}]".format(j))
            mb.add_row("split_plus[{}]".format(j), [(dev_plus[j], 1.0), (sign[j], -big)], LE, 0.0)
            mb.add_row("split_minus[{}]".format(j), [(dev_minus[j], 1.0), (sign[j], big)], LE, big)

    varmap = RecourseVariableMap(zeta, eta, a_plus, a_minus, beta1, beta2, kappa1, kappa2, lambda1, lambda2,
            iota, omega, m1, m2, m3, m4, dev_plus, dev_minus, sign)
    return mb.build(), varmap

def _slack_slot(instance, plan, worst, theta_m, config):
    model, vm = build_dispatch(instance, plan, worst, elastic_penalty=theta_m)
    sol = solve(model, config)
    if sol.status != Status.OPTIMAL:
        return None
    return first_slack_slot(sol.values(vm.shortage), sol.values(vm.surplus))

def solve_recourse(instance, plan, chi, bigm=None, config=None, penalty_sense=OPERATOR):
    if bigm is None:
        bigm = BigMConfig.default(instance)
    if config is None:
        config = SolverConfig()
    model, vm = build_recourse(instance, plan, chi, bigm, penalty_sense)
    sol = solve(model, config)
    if sol.status == Status.UNBOUNDED:
        raise RecourseUnboundedError("recourse for {} is unbounded: the dispatch cannot satisfy its "
                "ramp, capacity or reserve rows for this plan".format(instance.name))
    if sol.status != Status.OPTIMAL:
        raise RuntimeError("recourse for {} ended with status {}".format(instance.name, sol.status.value))

    worst = UncertaintyRealization(np.round(sol.values(vm.zeta)), np.round(sol.values(vm.eta)))
    duals = {name: sol.values(getattr(vm, name)) for name in _DUALS}
    products = {name: sol.values(getattr(vm, name)) for name in _PRODUCTS}
    rec = RecourseSolution(plan, worst, duals, products, sol.values(vm.dev_plus), sol.values(vm.dev_minus),
            sol.objective, chi, bigm.theta_m, penalty_sense,
            _slack_slot(instance, plan, worst, bigm.theta_m, config))
    if rec.uses_slack:
        logger.debug("%s: worst-case demand exceeds what the plan can serve; balance slack from slot %d",
                instance.name, rec.slack_slot)
    logger.debug("%s: recourse value %.6g, worst case zeta=%d eta=%d", instance.name, rec.value,
            int(worst.demand.sum()), int(worst.pv.sum()))
    return rec

def envelope_violations(rec, tol=1e-6):
    '''(product, index, gap) for every m-variable that differs from its
    balance dual times its indicator by more than tol.
    '''
    out = []
    pairs = (("m1", rec.worst_case.demand, "alpha_plus"), ("m2", rec.worst_case.demand, "alpha_minus"),
            ("m3", rec.worst_case.pv, "alpha_plus"), ("m4", rec.worst_case.pv, "alpha_minus"))
    for name, ind, dual in pairs:
        expected = ind * rec.duals[dual][None, :]
        gap = np.abs(rec.products[name] - expected)
        for idx in zip(*np.where(gap > tol)):
            out.append((name, tuple(int(k) for k in idx), float(gap[idx])))
    return out
