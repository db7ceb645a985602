'''Daily demand and PV output patterns and their random allocation onto the
loads and PVs of an instance.

There is one aggregate demand shape and three PV levels: LP (rainy day),
MP (medium) and HP (sunny day, enough midday output to force curtailment).
Levels are fractions of the instance's peak aggregate demand. Each unit gets
a fixed share of the aggregate profile, drawn from a flat Dirichlet with
numpy.random.default_rng(seed), so the same seed always gives the same
allocation.
'''
import numpy as np

from rerp.model.instance import PVSpec, LoadSpec, SystemInstance

DEMAND_SHAPE = np.array([0.62, 0.58, 0.55, 0.54, 0.55, 0.60, 0.70, 0.82, 0.90, 0.95, 0.97, 0.98,
        0.96, 0.95, 0.94, 0.95, 0.97, 1.00, 0.98, 0.94, 0.88, 0.80, 0.72, 0.66])
PV_SHAPE = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.3, 0.5, 0.7, 0.85, 0.95,
        1.0, 0.95, 0.85, 0.7, 0.5, 0.3, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0])

PV_LEVELS = {"LP": 0.16, "MP": 0.54, "HP": 0.90}
PATTERNS = ("LP", "MP", "HP")

_NOON = 12

def day_window(shape, horizon):
    '''The full day for horizon 24, otherwise the horizon slots around noon.'''
    if horizon == len(shape):
        return np.array(shape, dtype=np.float64)
    if horizon < 1 or horizon > len(shape):
        raise ValueError("horizon must be between 1 and {}, got {}".format(len(shape), horizon))
    start = min(max(_NOON - horizon // 2, 0), len(shape) - horizon)
    return np.array(shape[start:start + horizon], dtype=np.float64)

def allocate(total, n, rng):
    '''Split an aggregate [T] profile into n unit profiles [n, T].'''
    if n == 0:
        return np.zeros((0, len(total)))
    shares = rng.dirichlet(np.ones(n))
    return shares[:, None] * np.asarray(total, dtype=np.float64)[None, :]

def with_pattern(instance, pattern, seed, coeff=0.2, tariff=11.0, demand_peak=None):
    '''Copy of the instance whose loads and PVs follow the named pattern.

    Generators, reserve and budgets are kept; the unit counts are those of
    the instance. Deviations are coeff times the expected profile and the
    curtailment cost is tariff times the expected PV output.
    '''
    if pattern not in PV_LEVELS:
        raise ValueError("unknown PV pattern '{}', expected one of {}".format(pattern, ", ".join(PATTERNS)))
    T = instance.horizon
    if demand_peak is None:
        demand_peak = float(instance.load_expected.sum(axis=0).max())
    if not demand_peak > 0:
        raise ValueError("demand peak must be positive")

    rng = np.random.default_rng(seed)
    demand = allocate(demand_peak * day_window(DEMAND_SHAPE, T), instance.n_d, rng)
    pv = allocate(PV_LEVELS[pattern] * demand_peak * day_window(PV_SHAPE, T), instance.n_p, rng)

    loads = [LoadSpec(d.name, demand[j], coeff * demand[j]) for j, d in enumerate(instance.loads)]
    pvs = [PVSpec(p.name, pv[l], coeff * pv[l], tariff * pv[l]) for l, p in enumerate(instance.pvs)]
    return SystemInstance(T, instance.generators, pvs, loads, instance.system_reserve, instance.budgets,
            name="{}-{}".format(instance.name, pattern))
