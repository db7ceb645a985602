'''Row emitters shared by the deterministic UC model, the dispatch LP and the
robust master. Each takes a ModelBuilder plus id arrays ([unit, slot]) of
the variables it constrains; commitment and curtailment can be given either
as variable ids or as fixed 0/1 values. Row names use 1-based slots.
'''
import numpy as np

from rerp.milp.model import LE, EQ, GE

def declare_commitment(mb, instance, with_costs=True):
    '''Binary x, u, v per (generator, slot) and r per (PV, slot). Returns
    (on, start, stop, curtail) id arrays.
    '''
    T = instance.horizon
    on = np.empty((instance.n_g, T), dtype=int)
    start = np.empty_like(on)
    stop = np.empty_like(on)
    curtail = np.empty((instance.n_p, T), dtype=int)
    for i in range(instance.n_g):
        for t in range(T):
            on[i, t] = mb.add_binary("x[{},{}]".format(i, t+1), obj=instance.no_load_cost[i, t] if with_costs else 0.0)
            start[i, t] = mb.add_binary("u[{},{}]".format(i, t+1), obj=instance.startup_cost[i, t] if with_costs else 0.0)
            stop[i, t] = mb.add_binary("v[{},{}]".format(i, t+1), obj=instance.shutdown_cost[i, t] if with_costs else 0.0)
    for l in range(instance.n_p):
        for t in range(T):
            curtail[l, t] = mb.add_binary("r[{},{}]".format(l, t+1), obj=instance.curtail_cost[l, t] if with_costs else 0.0)
    return on, start, stop, curtail

def add_commitment_rows(mb, instance, on, start, stop):
    '''Start/stop logic and min-up/min-down windows; slot 1 is anchored to
    the generators' initial state, which enters as a constant.
    '''
    T = instance.horizon
    for i, g in enumerate(instance.generators):
        x0 = float(g.initial_on)

        def prev(t):
            return ([], x0) if t == 0 else ([(on[i, t-1], 1.0)], 0.0)

        for t in range(T):
            terms, const = prev(t)
            # x[t-1] - x[t] + u[t] >= 0
            mb.add_row("startup[{},{}]".format(i, t+1), terms + [(on[i, t], -1.0), (start[i, t], 1.0)], GE, -const)
            # x[t] - x[t-1] + v[t] >= 0
            neg = [(vid, -c) for vid, c in terms]
            mb.add_row("shutdown[{},{}]".format(i, t+1), neg + [(on[i, t], 1.0), (stop[i, t], 1.0)], GE, const)

            for tau in range(t + 1, min(t + int(g.min_up) - 1, T - 1) + 1):
                # x[t] - x[t-1] <= x[tau]
                mb.add_row("minup[{},{},{}]".format(i, t+1, tau+1), neg + [(on[i, t], 1.0), (on[i, tau], -1.0)], LE, const)
            for tau in range(t + 1, min(t + int(g.min_down) - 1, T - 1) + 1):
                # x[t-1] - x[t] <= 1 - x[tau]
                mb.add_row("mindown[{},{},{}]".format(i, t+1, tau+1), terms + [(on[i, t], -1.0), (on[i, tau], 1.0)], LE, 1.0 - const)

def declare_dispatch(mb, instance, with_costs=True):
    T = instance.horizon
    prod = np.empty((instance.n_g, T), dtype=int)
    res = np.empty_like(prod)
    for i in range(instance.n_g):
        for t in range(T):
            prod[i, t] = mb.add_var("p[{},{}]".format(i, t+1), obj=instance.marginal_cost[i, t] if with_costs else 0.0)
            res[i, t] = mb.add_var("q[{},{}]".format(i, t+1))
    return prod, res

def declare_balance_slack(mb, instance, penalty):
    '''Shortage/surplus pair per slot priced at penalty per MW.'''
    T = instance.horizon
    shortage = np.array([mb.add_var("shortage[{}]".format(t+1), obj=penalty) for t in range(T)], dtype=int)
    surplus = np.array([mb.add_var("surplus[{}]".format(t+1), obj=penalty) for t in range(T)], dtype=int)
    return shortage, surplus

def _on_term(on, on_values, i, t, coef):
    '''(terms, constant) for coef * x[i, t].'''
    if on is not None:
        return [(on[i, t], coef)], 0.0
    return [], coef * float(on_values[i, t])

def add_dispatch_rows(mb, instance, prod, res, demand, pv_avail, on=None, on_values=None,
        curtail=None, curtail_values=None, shortage=None, surplus=None):
    '''Power balance, ramping, capacity with reserve, generation bounds and
    reserve requirement for every slot.

    demand is the realized total demand per slot and pv_avail the realized
    uncurtailed PV output [PV, slot]; curtailment removes a PV's output for
    the slot.
    '''
    T = instance.horizon
    for t in range(T):
        terms = [(prod[i, t], 1.0) for i in range(instance.n_g)]
        rhs = float(demand[t])
        for l in range(instance.n_p):
            if curtail is not None:
                terms.append((curtail[l, t], -float(pv_avail[l, t])))
                rhs -= float(pv_avail[l, t])
            else:
                rhs -= (1.0 - float(curtail_values[l, t])) * float(pv_avail[l, t])
        if shortage is not None:
            terms += [(shortage[t], 1.0), (surplus[t], -1.0)]
        mb.add_row("balance[{}]".format(t+1), terms, EQ, rhs)

    for i, g in enumerate(instance.generators):
        for t in range(T):
            p, q = prod[i, t], res[i, t]
            if t == 0:
                mb.add_row("ramp_up[{},{}]".format(i, t+1), [(p, 1.0)], LE, g.ramp_up + g.initial_output)
                mb.add_row("ramp_down[{},{}]".format(i, t+1), [(p, -1.0)], LE, g.ramp_down - g.initial_output)
            else:
                mb.add_row("ramp_up[{},{}]".format(i, t+1), [(p, 1.0), (prod[i, t-1], -1.0)], LE, g.ramp_up)
                mb.add_row("ramp_down[{},{}]".format(i, t+1), [(prod[i, t-1], 1.0), (p, -1.0)], LE, g.ramp_down)

            mb.add_row("cap_max[{},{}]".format(i, t+1), [(p, 1.0), (q, 1.0)], LE, g.p_max)
            # p_min applies only when committed
            x_terms, x_const = _on_term(on, on_values, i, t, -g.p_min)
            mb.add_row("cap_min[{},{}]".format(i, t+1), [(p, 1.0), (q, 1.0)] + x_terms, GE, -x_const)
            x_terms, x_const = _on_term(on, on_values, i, t, -g.p_max)
            mb.add_row("gen_max[{},{}]".format(i, t+1), [(p, 1.0)] + x_terms, LE, -x_const)
            x_terms, x_const = _on_term(on, on_values, i, t, -g.p_min)
            mb.add_row("gen_min[{},{}]".format(i, t+1), [(p, 1.0)] + x_terms, GE, -x_const)
            mb.add_row("reserve_cap[{},{}]".format(i, t+1), [(q, 1.0)], LE, float(instance.reserve_cap[i, t]))

    for t in range(T):
        mb.add_row("reserve[{}]".format(t+1), [(res[i, t], 1.0) for i in range(instance.n_g)], GE,
                float(instance.system_reserve[t]))

def l1_coefficients(pv_avail):
    '''c[j, l, t] = (1/N_p - [j == l]) * e[l, t] so that PV j's deviation
    from the mean delivered energy is sum over (l, t) of c[j, l, t]*(1 - r[l, t]).
    '''
    n_p = pv_avail.shape[0]
    weights = np.full((n_p, n_p), 1.0 / n_p) - np.eye(n_p)
    return weights[:, :, None] * pv_avail[None, :, :]

def add_fairness_rows(mb, instance, curtail, pv_avail, chi):
    '''Deviation split a+[j] - a-[j] = mean energy - own energy, with
    chi * (a+ + a-) in the objective. Returns (dev_plus, dev_minus) ids.
    '''
    coef = l1_coefficients(pv_avail)
    dev_plus = np.empty(instance.n_p, dtype=int)
    dev_minus = np.empty(instance.n_p, dtype=int)
    for j in range(instance.n_p):
        dev_plus[j] = mb.add_var("a+[{}]".format(j), obj=chi)
        dev_minus[j] = mb.add_var("a-[{}]".format(j), obj=chi)
    for j in range(instance.n_p):
        terms = [(dev_plus[j], 1.0), (dev_minus[j], -1.0)]
        for l in range(instance.n_p):
            for t in range(instance.horizon):
                terms.append((curtail[l, t], coef[j, l, t]))
        mb.add_row("deviation[{}]".format(j), terms, EQ, float(coef[j].sum()))
    return dev_plus, dev_minus

def realized_arrays(instance, scenario=None):
    '''(total demand per slot, uncurtailed PV output [PV, slot]) for an
    UncertaintyRealization, a RealizedScenario or None (nominal).
    '''
    if scenario is None:
        return instance.load_expected.sum(axis=0), np.array(instance.pv_expected)
    if hasattr(scenario, "total_demand"):
        demand, pv = np.asarray(scenario.demand), np.asarray(scenario.pv)
    else:
        if scenario.demand.shape != (instance.n_d, instance.horizon) or \
                scenario.pv.shape != (instance.n_p, instance.horizon):
            raise ValueError("realization dimensions do not match instance {}".format(instance.name))
        demand = instance.load_expected + scenario.demand * instance.load_deviation
        pv = instance.pv_expected - scenario.pv * instance.pv_deviation
    if demand.shape[1:] != (instance.horizon,) or pv.shape != (instance.n_p, instance.horizon):
        raise ValueError("scenario dimensions do not match instance {}".format(instance.name))
    return demand.sum(axis=0), pv
