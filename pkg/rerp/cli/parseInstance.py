'''JSON instance files.

    {"name": ..., "horizon": T,
     "generators": [{"name", "no_load_cost", "startup_cost", "shutdown_cost",
                     "marginal_cost", "ramp_up", "ramp_down", "min_up",
                     "min_down", "p_max", "p_min", "reserve_cap",
                     "initial_on", "initial_output"}, ...],
     "pvs": [{"name", "expected", "deviation", "curtail_cost"}, ...],
     "loads": [{"name", "expected", "deviation"}, ...],
     "system_reserve": [...],
     "budgets": {"delta": [...], "gamma": [...]},
     "defaults": {"uncertainty_coeff": 0.2, "curtail_tariff": 11.0}}

Omitted deviations default to uncertainty_coeff times the expected profile
and omitted curtailment costs to curtail_tariff times the expected PV
output. Cost and reserve-cap fields of a generator may be scalars or
length-T lists.
'''
import json
import numpy as np

from rerp.model.instance import GeneratorSpec, PVSpec, LoadSpec, UncertaintyBudget, SystemInstance, validate_instance

DEFAULT_COEFF = 0.2
DEFAULT_TARIFF = 11.0

_GEN_FIELDS = ("no_load_cost", "startup_cost", "shutdown_cost", "marginal_cost", "ramp_up", "ramp_down",
        "min_up", "min_down", "p_max", "p_min", "reserve_cap")
_GEN_OPTIONAL = {"initial_on": 0, "initial_output": 0.0}

class InstanceFileError(ValueError):
    def __init__(self, message, line=None, column=None, violations=()):
        self.line = line
        self.column = column
        self.violations = tuple(violations)
        if line is not None:
            message = "{} (line {}, column {})".format(message, line, column)
        super(InstanceFileError, self).__init__(message)

def _get(doc, key, path):
    if not isinstance(doc, dict) or key not in doc:
        raise InstanceFileError("missing field {}".format(path))
    return doc[key]

def _profile(value, path, horizon):
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != (horizon,):
        raise InstanceFileError("{} must have {} entries".format(path, horizon))
    return arr

def instance_from_dict(doc, defaults=None):
    '''SystemInstance from a parsed document; defaults (uncertainty_coeff,
    curtail_tariff) apply where the document has no 'defaults' section.
    '''
    fill = {"uncertainty_coeff": DEFAULT_COEFF, "curtail_tariff": DEFAULT_TARIFF}
    fill.update(defaults or {})
    fill.update(doc.get("defaults", {}) if isinstance(doc, dict) else {})
    coeff, tariff = float(fill["uncertainty_coeff"]), float(fill["curtail_tariff"])

    horizon = _get(doc, "horizon", "horizon")
    if not isinstance(horizon, int) or horizon < 1:
        raise InstanceFileError("horizon must be a positive integer")

    gens = []
    for i, g in enumerate(_get(doc, "generators", "generators")):
        path = "generators[{}]".format(i)
        values = {k: _get(g, k, "{}.{}".format(path, k)) for k in _GEN_FIELDS}
        for k, default in _GEN_OPTIONAL.items():
            values[k] = g.get(k, default)
        gens.append(GeneratorSpec(name=g.get("name", "G{}".format(i + 1)), **values))

    pvs = []
    for l, p in enumerate(doc.get("pvs", [])):
        path = "pvs[{}]".format(l)
        zbar = _profile(_get(p, "expected", path + ".expected"), path + ".expected", horizon)
        zhat = _profile(p["deviation"], path + ".deviation", horizon) if "deviation" in p else coeff * zbar
        cost = _profile(p["curtail_cost"], path + ".curtail_cost", horizon) if "curtail_cost" in p else tariff * zbar
        pvs.append(PVSpec(p.get("name", "PV{}".format(l + 1)), zbar, zhat, cost))

    loads = []
    for j, d in enumerate(_get(doc, "loads", "loads")):
        path = "loads[{}]".format(j)
        dbar = _profile(_get(d, "expected", path + ".expected"), path + ".expected", horizon)
        dhat = _profile(d["deviation"], path + ".deviation", horizon) if "deviation" in d else coeff * dbar
        loads.append(LoadSpec(d.get("name", "D{}".format(j + 1)), dbar, dhat))

    reserve = _profile(doc.get("system_reserve", np.zeros(horizon)), "system_reserve", horizon)
    budgets = doc.get("budgets", {})
    delta = _profile(budgets.get("delta", np.zeros(horizon)), "budgets.delta", horizon)
    gamma = _profile(budgets.get("gamma", np.zeros(horizon)), "budgets.gamma", horizon)
    return SystemInstance(horizon, gens, pvs, loads, reserve, UncertaintyBudget(delta, gamma),
            name=doc.get("name", "instance"))

def parse_instance(path, defaults=None, validate=True):
    '''Read and validate an instance file. Raises InstanceFileError with the
    line and column of a syntax error, or with the field paths that fail
    validation.
    '''
    with open(path, 'r') as fp:
        text = fp.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise InstanceFileError("{}: {}".format(path, err.msg), err.lineno, err.colno)
    if not isinstance(doc, dict):
        raise InstanceFileError("{}: top level must be an object".format(path))

    try:
        instance = instance_from_dict(doc, defaults)
    except InstanceFileError as err:
        raise InstanceFileError("{}: {}".format(path, err))
    except (TypeError, ValueError) as err:
        raise InstanceFileError("{}: {}".format(path, err))

    if validate:
        report = validate_instance(instance)
        if not report.passed:
            raise InstanceFileError("{} fails validation:\n{}".format(path, report), violations=report.violations)
    return instance

def _field(value):
    if isinstance(value, tuple):
        return list(value)
    return value

def instance_to_dict(instance):
    gens = []
    for g in instance.generators:
        entry = {"name": g.name}
        for k in _GEN_FIELDS + tuple(_GEN_OPTIONAL):
            entry[k] = _field(getattr(g, k))
        gens.append(entry)
    return {
        "name": instance.name,
        "horizon": instance.horizon,
        "generators": gens,
        "pvs": [{"name": p.name, "expected": list(map(float, p.expected)), "deviation": list(map(float, p.deviation)),
                "curtail_cost": list(map(float, p.curtail_cost))} for p in instance.pvs],
        "loads": [{"name": d.name, "expected": list(map(float, d.expected)), "deviation": list(map(float, d.deviation))}
                for d in instance.loads],
        "system_reserve": list(map(float, instance.system_reserve)),
        "budgets": {"delta": list(map(float, instance.budgets.demand)), "gamma": list(map(float, instance.budgets.pv))},
    }

def serialize_instance(instance, path=None):
    '''JSON text for the instance, with every default written out; also
    written to path when given.
    '''
    text = json.dumps(instance_to_dict(instance), indent=2)
    if path is not None:
        with open(path, 'w') as fp:
            fp.write(text)
    return text
