'''Brute-force oracles for the robust problem on desk-sized instances.

worst_case_value() enumerates every binary budget-feasible realization for a
fixed plan; robust_by_enumeration() also enumerates every admissible plan
(commitment with minimal start/stop flags and every curtailment pattern).
Dispatch LPs are elastic at theta and solved by the scipy backend, which
keeps the oracle independent of the bundled solver.
'''
import itertools
import logging
import numpy as np

from rerp.milp.model import SolverConfig
from rerp.model.instance import UncertaintyRealization
from rerp.model.plan import CommitmentPlan
from rerp.uc.dispatch import dispatch_value
from rerp.uc.deterministic import deviations
from rerp.uc.rows import realized_arrays
from rerp.robust.recourse import OPERATOR, PENALTY_SENSES

logger = logging.getLogger(__name__)

MAX_PLAN_BITS = 16

ORACLE_CONFIG = SolverConfig(backend="scipy")

def _slot_patterns(n, budget):
    '''0/1 vectors of length n with at most budget ones.'''
    return [np.array(bits, dtype=np.float64) for bits in itertools.product((0, 1), repeat=n)
            if sum(bits) <= budget + 1e-9]

def budget_realizations(instance):
    '''Every binary realization within the per-slot budgets.'''
    T = instance.horizon
    demand_slots = [_slot_patterns(instance.n_d, instance.budgets.demand[t]) for t in range(T)]
    pv_slots = [_slot_patterns(instance.n_p, instance.budgets.pv[t]) for t in range(T)]
    out = []
    for dcols in itertools.product(*demand_slots):
        demand = np.stack(dcols, axis=1) if instance.n_d > 0 else np.zeros((0, T))
        for pcols in itertools.product(*pv_slots):
            pv = np.stack(pcols, axis=1) if instance.n_p > 0 else np.zeros((0, T))
            out.append(UncertaintyRealization(demand, pv))
    return out

def fairness_term(instance, plan, realization):
    '''L1 deviation of delivered PV energy under the plan's curtailment.'''
    if instance.n_p == 0:
        return 0.0
    _, pv_avail = realized_arrays(instance, realization)
    return float(np.abs(deviations(pv_avail, plan.curtail)).sum())

def _signed(chi, penalty_sense):
    if penalty_sense not in PENALTY_SENSES:
        raise ValueError("unknown penalty sense '{}'".format(penalty_sense))
    return chi if penalty_sense == OPERATOR else -chi

def scenario_value(instance, plan, realization, chi, theta_m, penalty_sense=OPERATOR, config=ORACLE_CONFIG):
    value = dispatch_value(instance, plan, realization, elastic_penalty=theta_m, config=config)
    if value is None:
        return None
    return value + _signed(chi, penalty_sense) * fairness_term(instance, plan, realization)

def worst_case_value(instance, plan, chi, theta_m, penalty_sense=OPERATOR, realizations=None,
        config=ORACLE_CONFIG, abort_above=None):
    '''(value, realization) maximizing elastic dispatch cost +/- chi*L1.

    Returns (None, realization) if the dispatch is structurally infeasible
    for some realization. With abort_above, stops as soon as the running
    maximum exceeds it and returns that partial maximum.
    '''
    if realizations is None:
        realizations = budget_realizations(instance)
    best, arg = -np.inf, None
    for real in realizations:
        value = scenario_value(instance, plan, real, chi, theta_m, penalty_sense, config)
        if value is None:
            return None, real
        if value > best:
            best, arg = value, real
            if abort_above is not None and best > abort_above:
                break
    return best, arg

def admissible_plans(instance):
    '''Every plan that passes CommitmentPlan.violations, with the minimal
    start/stop flags for its commitment.
    '''
    T = instance.horizon
    bits = instance.n_g * T + instance.n_p * T
    if bits > MAX_PLAN_BITS:
        raise ValueError("{} first-stage binaries is too many to enumerate".format(bits))
    commitments = []
    for on in itertools.product((0, 1), repeat=instance.n_g * T):
        plan = CommitmentPlan.from_on(instance, np.array(on, dtype=np.float64))
        if len(plan.violations(instance)) == 0:
            commitments.append(np.array(on, dtype=np.float64))
    for on in commitments:
        for r in itertools.product((0, 1), repeat=instance.n_p * T):
            yield CommitmentPlan.from_on(instance, on, np.array(r, dtype=np.float64))

def robust_by_enumeration(instance, chi, theta_m, penalty_sense=OPERATOR, config=ORACLE_CONFIG):
    '''(value, plan, realization) of min over plans of first-stage cost plus
    the worst-case recourse. Plans are visited cheapest first; each plan's
    realization scan starts with the worst cases found so far and aborts
    once the plan cannot beat the incumbent.
    '''
    realizations = budget_realizations(instance)
    plans = sorted(admissible_plans(instance),
            key=lambda p: p.commitment_cost(instance) + p.curtailment_cost(instance))
    # recourse never drops below the fairness floor
    floor = 0.0 if penalty_sense == OPERATOR else -2.0 * chi * float(instance.pv_expected.sum())
    best = (np.inf, None, None)
    for plan in plans:
        first = plan.commitment_cost(instance) + plan.curtailment_cost(instance)
        if first + floor >= best[0]:
            break
        value, worst = worst_case_value(instance, plan, chi, theta_m, penalty_sense, realizations, config,
                abort_above=best[0] - first)
        if value is None:
            continue
        if first + value < best[0]:
            best = (first + value, plan, worst)
        # worst-first ordering for the next plans
        realizations.remove(worst)
        realizations.insert(0, worst)
    logger.debug("%s: enumeration value %.6g over %d realizations", instance.name, best[0], len(realizations))
    return best
