'''Problem data for the unit-commitment models: generators, PV units, loads,
reserve requirements and the per-slot uncertainty budgets.

All types are frozen dataclasses holding read-only numpy arrays, so an
instance can be shared between worker processes and solver calls without
copying. Per-slot quantities are indexed [unit, slot] with slots 0..T-1;
generator cost and reserve-cap fields may be scalars (constant over the
horizon) or length-T sequences.
'''
from dataclasses import dataclass, field
from functools import cached_property
import numpy as np

def _frozen_array(values, dtype=np.float64):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr

def _series(value, horizon):
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        return np.full(horizon, float(arr))
    return arr

@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    no_load_cost: object
    startup_cost: object
    shutdown_cost: object
    marginal_cost: object
    ramp_up: float
    ramp_down: float
    min_up: int
    min_down: int
    p_max: float
    p_min: float
    reserve_cap: object
    initial_on: int = 0
    initial_output: float = 0.0

    def __post_init__(self):
        for attr in ("no_load_cost", "startup_cost", "shutdown_cost", "marginal_cost", "reserve_cap"):
            value = getattr(self, attr)
            if np.ndim(value) == 0:
                object.__setattr__(self, attr, float(value))
            else:
                object.__setattr__(self, attr, tuple(float(v) for v in np.ravel(value)))

    def series(self, attr, horizon):
        '''Cost or reserve-cap field as a length-horizon array.'''
        return _series(getattr(self, attr), horizon)

@dataclass(frozen=True, eq=False)
class PVSpec:
    name: str
    expected: np.ndarray
    deviation: np.ndarray
    curtail_cost: np.ndarray

    def __post_init__(self):
        for attr in ("expected", "deviation", "curtail_cost"):
            object.__setattr__(self, attr, _frozen_array(getattr(self, attr)))

@dataclass(frozen=True, eq=False)
class LoadSpec:
    name: str
    expected: np.ndarray
    deviation: np.ndarray

    def __post_init__(self):
        for attr in ("expected", "deviation"):
            object.__setattr__(self, attr, _frozen_array(getattr(self, attr)))

@dataclass(frozen=True, eq=False)
class UncertaintyBudget:
    demand: np.ndarray
    pv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "demand", _frozen_array(self.demand))
        object.__setattr__(self, "pv", _frozen_array(self.pv))

@dataclass(frozen=True, eq=False)
class SystemInstance:
    horizon: int
    generators: tuple
    pvs: tuple
    loads: tuple
    system_reserve: np.ndarray
    budgets: UncertaintyBudget
    name: str = "instance"

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "pvs", tuple(self.pvs))
        object.__setattr__(self, "loads", tuple(self.loads))
        object.__setattr__(self, "system_reserve", _frozen_array(self.system_reserve))

    @property
    def n_g(self):
        return len(self.generators)

    @property
    def n_p(self):
        return len(self.pvs)

    @property
    def n_d(self):
        return len(self.loads)

    def _gen_matrix(self, attr):
        T = self.horizon
        return _frozen_array([g.series(attr, T) for g in self.generators]).reshape(self.n_g, T)

    @cached_property
    def no_load_cost(self):
        return self._gen_matrix("no_load_cost")

    @cached_property
    def startup_cost(self):
        return self._gen_matrix("startup_cost")

    @cached_property
    def shutdown_cost(self):
        return self._gen_matrix("shutdown_cost")

    @cached_property
    def marginal_cost(self):
        return self._gen_matrix("marginal_cost")

    @cached_property
    def reserve_cap(self):
        return self._gen_matrix("reserve_cap")

    @cached_property
    def pv_expected(self):
        return _frozen_array([pv.expected for pv in self.pvs]).reshape(self.n_p, self.horizon)

    @cached_property
    def pv_deviation(self):
        return _frozen_array([pv.deviation for pv in self.pvs]).reshape(self.n_p, self.horizon)

    @cached_property
    def curtail_cost(self):
        return _frozen_array([pv.curtail_cost for pv in self.pvs]).reshape(self.n_p, self.horizon)

    @cached_property
    def load_expected(self):
        return _frozen_array([ld.expected for ld in self.loads]).reshape(self.n_d, self.horizon)

    @cached_property
    def load_deviation(self):
        return _frozen_array([ld.deviation for ld in self.loads]).reshape(self.n_d, self.horizon)

    def check_shapes(self):
        '''Raise ValueError if any per-slot array does not have length T.
        Builders call this; validate_instance() gives the full report.
        '''
        report = validate_instance(self, shapes_only=True)
        if not report.passed:
            raise ValueError("instance {} has inconsistent dimensions: {}".format(self.name, report.violations[0]))

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return len(self.violations) == 0

    def __str__(self):
        if self.passed:
            return "pass"
        return "\n".join("{}: {}".format(path, msg) for path, msg in self.violations)

def _check_series(out, path, value, horizon, allow_scalar=False):
    arr = np.asarray(value, dtype=np.float64)
    if allow_scalar and arr.ndim == 0:
        arr = np.full(horizon, float(arr))
    if arr.shape != (horizon,):
        out.append((path, "expected {} slots, got shape {}".format(horizon, arr.shape)))
        return None
    if not np.all(np.isfinite(arr)):
        out.append((path, "non-finite entry"))
        return None
    return arr

def _check_nonneg(out, path, arr):
    if arr is not None and np.any(arr < 0):
        k = int(np.where(arr < 0)[0][0])
        out.append(("{}[{}]".format(path, k), "must be >= 0"))

def validate_instance(instance, shapes_only=False):
    '''Check every data invariant of an instance and return a
    ValidationReport listing (field path, message) pairs.
    '''
    out = []
    T = instance.horizon
    if not isinstance(T, (int, np.integer)) or T < 1:
        return ValidationReport((("horizon", "must be a positive integer"),))

    for name, units in (("generators", instance.generators), ("pvs", instance.pvs), ("loads", instance.loads)):
        if len(units) == 0 and not shapes_only:
            out.append((name, "at least one entry required"))

    for i, g in enumerate(instance.generators):
        path = "generators[{}]".format(i)
        series = {}
        for attr in ("no_load_cost", "startup_cost", "shutdown_cost", "marginal_cost", "reserve_cap"):
            series[attr] = _check_series(out, "{}.{}".format(path, attr), getattr(g, attr), T, allow_scalar=True)
        if shapes_only:
            continue
        _check_nonneg(out, "{}.reserve_cap".format(path), series["reserve_cap"])
        if not g.p_min <= g.p_max:
            out.append(("{}.p_min".format(path), "p_min {} exceeds p_max {}".format(g.p_min, g.p_max)))
        if g.p_min < 0:
            out.append(("{}.p_min".format(path), "must be >= 0"))
        for attr in ("ramp_up", "ramp_down", "min_up", "min_down"):
            if getattr(g, attr) < 0:
                out.append(("{}.{}".format(path, attr), "must be >= 0"))
        if g.initial_on not in (0, 1):
            out.append(("{}.initial_on".format(path), "must be 0 or 1"))
        if not 0 <= g.initial_output <= g.p_max:
            out.append(("{}.initial_output".format(path), "must lie in [0, p_max]"))
        if g.initial_on == 0 and g.initial_output != 0:
            out.append(("{}.initial_output".format(path), "must be 0 for a unit initially off"))

    for l, pv in enumerate(instance.pvs):
        path = "pvs[{}]".format(l)
        zbar = _check_series(out, path + ".expected", pv.expected, T)
        zhat = _check_series(out, path + ".deviation", pv.deviation, T)
        cost = _check_series(out, path + ".curtail_cost", pv.curtail_cost, T)
        if shapes_only:
            continue
        _check_nonneg(out, path + ".expected", zbar)
        _check_nonneg(out, path + ".deviation", zhat)
        _check_nonneg(out, path + ".curtail_cost", cost)
        if zbar is not None and zhat is not None and np.any(zhat > zbar):
            k = int(np.where(zhat > zbar)[0][0])
            out.append(("{}.deviation[{}]".format(path, k), "deviation exceeds expected output"))

    for j, ld in enumerate(instance.loads):
        path = "loads[{}]".format(j)
        dbar = _check_series(out, path + ".expected", ld.expected, T)
        dhat = _check_series(out, path + ".deviation", ld.deviation, T)
        if shapes_only:
            continue
        _check_nonneg(out, path + ".expected", dbar)
        _check_nonneg(out, path + ".deviation", dhat)
        if dbar is not None and dhat is not None and np.any(dbar - dhat < 0):
            k = int(np.where(dbar - dhat < 0)[0][0])
            out.append(("{}.deviation[{}]".format(path, k), "deviation exceeds expected load"))

    reserve = _check_series(out, "system_reserve", instance.system_reserve, T)
    delta = _check_series(out, "budgets.demand", instance.budgets.demand, T)
    gamma = _check_series(out, "budgets.pv", instance.budgets.pv, T)
    if not shapes_only:
        _check_nonneg(out, "system_reserve", reserve)
        for path, arr, cap in (("budgets.demand", delta, instance.n_d), ("budgets.pv", gamma, instance.n_p)):
            if arr is None:
                continue
            bad = np.where((arr < 0) | (arr > cap))[0]
            if len(bad) > 0:
                out.append(("{}[{}]".format(path, int(bad[0])), "must lie in [0, {}]".format(cap)))

    return ValidationReport(tuple(out))

@dataclass(frozen=True, eq=False)
class UncertaintyRealization:
    '''Normalized deviations: demand [N_d, T] and pv [N_p, T], each in [0, 1].'''
    demand: np.ndarray
    pv: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "demand", _frozen_array(self.demand))
        object.__setattr__(self, "pv", _frozen_array(self.pv))

    @classmethod
    def nominal(cls, instance):
        return cls(np.zeros((instance.n_d, instance.horizon)), np.zeros((instance.n_p, instance.horizon)))

    def within_budget(self, instance, tol=1e-9):
        if np.any(self.demand < -tol) or np.any(self.demand > 1 + tol) \
                or np.any(self.pv < -tol) or np.any(self.pv > 1 + tol):
            return False
        return bool(np.all(self.demand.sum(axis=0) <= instance.budgets.demand + tol)
                and np.all(self.pv.sum(axis=0) <= instance.budgets.pv + tol))

    def key(self):
        return (self.demand.round(9).tobytes(), self.pv.round(9).tobytes())

@dataclass(frozen=True, eq=False)
class RealizedScenario:
    demand: np.ndarray
    pv: np.ndarray

    @property
    def total_demand(self):
        return self.demand.sum(axis=0)

    @property
    def total_pv(self):
        return self.pv.sum(axis=0)

def _curtail_matrix(instance, curtail):
    if curtail is None:
        return np.zeros((instance.n_p, instance.horizon))
    r = np.asarray(curtail, dtype=np.float64)
    if r.shape != (instance.n_p, instance.horizon):
        raise ValueError("curtailment has shape {}, expected {}".format(r.shape, (instance.n_p, instance.horizon)))
    return r

def apply_uncertainty(instance, realization, curtail=None):
    '''Realized demand d = dbar + zeta*dhat and PV output
    z = (zbar - eta*zhat)*(1 - r), elementwise per unit and slot.
    '''
    if realization.demand.shape != (instance.n_d, instance.horizon):
        raise ValueError("demand deviation has shape {}, expected {}".format(realization.demand.shape,
            (instance.n_d, instance.horizon)))
    if realization.pv.shape != (instance.n_p, instance.horizon):
        raise ValueError("pv deviation has shape {}, expected {}".format(realization.pv.shape,
            (instance.n_p, instance.horizon)))
    r = _curtail_matrix(instance, curtail)

    demand = instance.load_expected + realization.demand * instance.load_deviation
    pv = (instance.pv_expected - realization.pv * instance.pv_deviation) * (1.0 - r)
    return RealizedScenario(_frozen_array(demand), _frozen_array(pv))
