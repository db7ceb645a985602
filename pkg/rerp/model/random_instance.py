'''Small synthetic instances for tests and experiments.

random_instance() draws a reduced system (by default 2 generators, 2 PVs,
2 loads, 2 slots) whose last generator is a slack unit: no commitment
costs, initially on, p_min = 0 and practically unlimited capacity and ramps
at a high marginal cost. asymmetric_pv_instance() is the curtailment
fairness fixture: one must-run base unit and three PVs, the first slightly
smaller, with a midday surplus that forces one PV off in the peak slots.
'''
import numpy as np

from rerp.model.instance import GeneratorSpec, PVSpec, LoadSpec, UncertaintyBudget, SystemInstance

def slack_generator(horizon, cost=200.0, capacity=1000.0, name="slack"):
    return GeneratorSpec(name=name, no_load_cost=0.0, startup_cost=0.0, shutdown_cost=0.0,
            marginal_cost=cost, ramp_up=capacity, ramp_down=capacity, min_up=0, min_down=0,
            p_max=capacity, p_min=0.0, reserve_cap=capacity, initial_on=1, initial_output=0.0)

def random_instance(seed, n_g=2, n_p=2, n_d=2, horizon=2, delta=1.0, gamma=1.0, coeff=0.2,
        with_slack=True):
    rng = np.random.default_rng(seed)
    gens = []
    n_real = n_g - 1 if with_slack else n_g
    for i in range(n_real):
        p_max = rng.uniform(20.0, 40.0)
        p_min = rng.uniform(0.0, 5.0)
        on = int(rng.integers(0, 2))
        gens.append(GeneratorSpec(name="G{}".format(i + 1), no_load_cost=rng.uniform(0.0, 20.0),
                startup_cost=rng.uniform(0.0, 30.0), shutdown_cost=rng.uniform(0.0, 10.0),
                marginal_cost=rng.uniform(10.0, 30.0), ramp_up=p_max, ramp_down=p_max,
                min_up=int(rng.integers(1, 3)), min_down=int(rng.integers(1, 3)), p_max=p_max,
                p_min=p_min, reserve_cap=0.5 * p_max, initial_on=on,
                initial_output=rng.uniform(p_min, p_max) if on else 0.0))
    if with_slack:
        gens.append(slack_generator(horizon))

    pvs = []
    for l in range(n_p):
        zbar = rng.uniform(0.0, 10.0, size=horizon)
        pvs.append(PVSpec("PV{}".format(l + 1), zbar, coeff * zbar, rng.uniform(0.5, 2.0) * zbar))
    loads = []
    for j in range(n_d):
        dbar = rng.uniform(5.0, 20.0, size=horizon)
        loads.append(LoadSpec("D{}".format(j + 1), dbar, coeff * dbar))

    budgets = UncertaintyBudget(np.full(horizon, float(delta)), np.full(horizon, float(gamma)))
    return SystemInstance(horizon, gens, pvs, loads, rng.uniform(0.0, 5.0, size=horizon), budgets,
            name="random{}".format(seed))

def asymmetric_pv_instance(horizon=6, small_cap=10.0, large_cap=10.5, tariff=11.0, coeff=0.2):
    '''Three PVs on a flat 52 MW load served by a must-run 30-60 MW unit.
    At the two peak slots the PVs produce 31 MW against 22 MW of headroom,
    so exactly one PV must be curtailed there; the smaller PV is always the
    cheapest to curtail.
    '''
    shape = np.array([0.3, 0.7, 1.0, 1.0, 0.7, 0.3])
    if horizon != len(shape):
        shape = np.interp(np.linspace(0.0, 1.0, horizon), np.linspace(0.0, 1.0, len(shape)), shape)
        shape[np.argsort(-shape)[:2]] = 1.0

    base = GeneratorSpec(name="G1", no_load_cost=0.0, startup_cost=25.0, shutdown_cost=10.0,
            marginal_cost=13.4, ramp_up=60.0, ramp_down=60.0, min_up=1, min_down=horizon,
            p_max=60.0, p_min=30.0, reserve_cap=45.4, initial_on=1, initial_output=45.0)
    pvs = []
    for l, cap in enumerate((small_cap, large_cap, large_cap)):
        zbar = cap * shape
        pvs.append(PVSpec("PV{}".format(l + 1), zbar, coeff * zbar, tariff * zbar))
    loads = [LoadSpec("D1", np.full(horizon, 30.0), np.full(horizon, 30.0 * coeff)),
            LoadSpec("D2", np.full(horizon, 22.0), np.full(horizon, 22.0 * coeff))]
    budgets = UncertaintyBudget(np.zeros(horizon), np.zeros(horizon))
    return SystemInstance(horizon, [base], pvs, loads, np.zeros(horizon), budgets, name="asymmetric")

def symmetric_pv_instance(horizon=4, cap=5.0, coeff=0.2):
    '''Two identical PVs that never need curtailment.'''
    shape = np.linspace(0.5, 1.0, horizon)
    base = GeneratorSpec(name="G1", no_load_cost=0.0, startup_cost=0.0, shutdown_cost=0.0,
            marginal_cost=13.4, ramp_up=60.0, ramp_down=60.0, min_up=0, min_down=0,
            p_max=60.0, p_min=0.0, reserve_cap=30.0, initial_on=1, initial_output=30.0)
    pvs = [PVSpec("PV{}".format(l + 1), cap * shape, coeff * cap * shape, 11.0 * cap * shape) for l in range(2)]
    loads = [LoadSpec("D1", np.full(horizon, 30.0), np.full(horizon, 30.0 * coeff))]
    budgets = UncertaintyBudget(np.zeros(horizon), np.zeros(horizon))
    return SystemInstance(horizon, [base], pvs, loads, np.zeros(horizon), budgets, name="symmetric")
