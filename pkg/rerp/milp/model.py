import math
from dataclasses import dataclass, field
from enum import Enum
import numpy as np
import scipy.sparse as sp

LE, EQ, GE = "<=", "=", ">="
MINIMIZE, MAXIMIZE = "min", "max"
_SENSES = (LE, EQ, GE)

class ModelError(ValueError):
    pass

class Status(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"

@dataclass(frozen=True)
class SolverConfig:
    mip_gap: float = 1e-4
    feasibility_tol: float = 1e-6
    node_limit: int = 200000
    time_limit: float = None
    backend: str = "bundled"

    def __post_init__(self):
        if not self.mip_gap > 0 or not self.feasibility_tol > 0:
            raise ValueError("solver tolerances must be positive")
        if self.node_limit < 1:
            raise ValueError("node_limit must be at least 1")
        if self.backend == "external":
            object.__setattr__(self, "backend", "scipy")
        if self.backend not in ("bundled", "scipy"):
            raise ValueError("unrecognized backend '{}'".format(self.backend))

@dataclass(frozen=True, eq=False)
class MilpModel:
    '''Immutable linear model: min/max c.x + obj_const subject to
    A x (senses) rhs and lb <= x <= ub, with the variables flagged in binary
    restricted to {0, 1}.

    A is stored as a scipy CSR matrix with one row per constraint; rows and
    variables keep their names for debugging and for dump_lp().
    '''
    name: str
    var_names: tuple
    lb: np.ndarray
    ub: np.ndarray
    binary: np.ndarray
    c: np.ndarray
    A: sp.csr_matrix
    senses: tuple
    rhs: np.ndarray
    row_names: tuple
    sense: str = MINIMIZE
    obj_const: float = 0.0
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.var_names)
        m = len(self.row_names)
        for arr in (self.lb, self.ub, self.binary, self.c):
            if arr.shape != (n,):
                raise ModelError("variable arrays must have length {}".format(n))
        if self.A.shape != (m, n) or self.rhs.shape != (m,) or len(self.senses) != m:
            raise ModelError("constraint data inconsistent with {} rows and {} variables".format(m, n))
        if self.sense not in (MINIMIZE, MAXIMIZE):
            raise ModelError("objective sense must be 'min' or 'max'")
        for i, s in enumerate(self.senses):
            if s not in _SENSES:
                raise ModelError("row {} has unknown sense '{}'".format(self.row_names[i], s))
        if not np.all(np.isfinite(self.rhs)):
            raise ModelError("right-hand sides must be finite")
        bin_ids = np.where(self.binary)[0]
        if np.any(self.lb[bin_ids] < 0) or np.any(self.ub[bin_ids] > 1) \
                or not np.all(np.isfinite(self.lb[bin_ids])) or not np.all(np.isfinite(self.ub[bin_ids])):
            raise ModelError("binary variables need finite bounds within [0, 1]")
        if np.any(self.lb > self.ub):
            j = int(np.where(self.lb > self.ub)[0][0])
            raise ModelError("variable {} has lb > ub".format(self.var_names[j]))
        for arr in (self.lb, self.ub, self.binary, self.c, self.rhs):
            arr.setflags(write=False)
        object.__setattr__(self, "_index", {name: j for j, name in enumerate(self.var_names)})

    @property
    def num_vars(self):
        return len(self.var_names)

    @property
    def num_rows(self):
        return len(self.row_names)

    @property
    def num_binaries(self):
        return int(np.count_nonzero(self.binary))

    def var_id(self, name):
        if name not in self._index:
            raise ModelError("unknown variable '{}'".format(name))
        return self._index[name]

    def objective_value(self, x):
        return float(np.dot(self.c, x) + self.obj_const)

class ModelBuilder(object):
    '''Accumulates variables and rows, then freezes them into a MilpModel.
    Variable ids are consecutive integers in declaration order.
    '''
    def __init__(self, name="model", sense=MINIMIZE):
        self.name = name
        self.sense = sense
        self.obj_const = 0.0
        self._names, self._lb, self._ub, self._binary, self._obj = [], [], [], [], []
        self._index = {}
        self._row_names, self._senses, self._rhs = [], [], []
        self._rows, self._cols, self._vals = [], [], []

    @property
    def num_vars(self):
        return len(self._names)

    @property
    def num_rows(self):
        return len(self._row_names)

    def add_var(self, name, lb=0.0, ub=math.inf, binary=False, obj=0.0):
        if name in self._index:
            raise ModelError("duplicate variable '{}'".format(name))
        if binary:
            lb, ub = max(lb, 0.0), min(ub, 1.0)
        vid = len(self._names)
        self._index[name] = vid
        self._names.append(name)
        self._lb.append(float(lb))
        self._ub.append(float(ub))
        self._binary.append(bool(binary))
        self._obj.append(float(obj))
        return vid

    def add_binary(self, name, obj=0.0):
        return self.add_var(name, 0.0, 1.0, binary=True, obj=obj)

    def add_obj(self, vid, coef):
        self._obj[vid] += float(coef)

    def add_row(self, name, terms, sense, rhs):
        '''Add the row sum(coef * x[vid] for vid, coef in terms) (sense) rhs.
        terms is a dict or an iterable of (vid, coef); repeated ids are summed.
        '''
        if sense not in _SENSES:
            raise ModelError("row {} has unknown sense '{}'".format(name, sense))
        if not math.isfinite(rhs):
            raise ModelError("row {} has non-finite rhs".format(name))
        if isinstance(terms, dict):
            terms = terms.items()
        merged = {}
        for vid, coef in terms:
            if vid < 0 or vid >= len(self._names):
                raise ModelError("row {} references undeclared variable id {}".format(name, vid))
            merged[vid] = merged.get(vid, 0.0) + float(coef)

        row = len(self._row_names)
        for vid, coef in merged.items():
            if coef != 0.0:
                self._rows.append(row)
                self._cols.append(vid)
                self._vals.append(coef)
        self._row_names.append(name)
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        return row

    def build(self):
        n, m = len(self._names), len(self._row_names)
        A = sp.csr_matrix((self._vals, (self._rows, self._cols)), shape=(m, n), dtype=np.float64)
        return MilpModel(name=self.name, var_names=tuple(self._names),
                lb=np.array(self._lb, dtype=np.float64), ub=np.array(self._ub, dtype=np.float64),
                binary=np.array(self._binary, dtype=bool), c=np.array(self._obj, dtype=np.float64),
                A=A, senses=tuple(self._senses), rhs=np.array(self._rhs, dtype=np.float64),
                row_names=tuple(self._row_names), sense=self.sense, obj_const=self.obj_const)

@dataclass(frozen=True, eq=False)
class MilpSolution:
    status: Status
    objective: float = None
    x: np.ndarray = None
    gap: float = None
    bound: float = None
    nodes: int = 0
    iterations: int = 0

    @property
    def optimal(self):
        return self.status == Status.OPTIMAL

    def __getitem__(self, vid):
        return float(self.x[vid])

    def values(self, ids):
        return self.x[np.asarray(ids, dtype=int)]

@dataclass(frozen=True)
class Violation:
    kind: str
    name: str
    magnitude: float

def _as_vector(model, assignment):
    if isinstance(assignment, dict):
        x = np.empty(model.num_vars)
        for j, name in enumerate(model.var_names):
            if name not in assignment:
                raise ModelError("assignment is missing variable '{}'".format(name))
            x[j] = assignment[name]
        return x

    x = np.asarray(assignment, dtype=np.float64)
    if x.shape != (model.num_vars,):
        raise ModelError("assignment covers {} of {} variables".format(x.size, model.num_vars))
    return x

def check_feasible(model, assignment, tol=1e-6):
    '''Return every row, bound and integrality violation larger than tol.
    An empty list means the assignment is feasible.
    '''
    x = _as_vector(model, assignment)
    violations = []
    act = model.A.dot(x)
    for i, (s, rhs) in enumerate(zip(model.senses, model.rhs)):
        if s == LE:
            excess = act[i] - rhs
        elif s == GE:
            excess = rhs - act[i]
        else:
            excess = abs(act[i] - rhs)
        if excess > tol:
            violations.append(Violation("row", model.row_names[i], float(excess)))

    for j, name in enumerate(model.var_names):
        if model.lb[j] - x[j] > tol:
            violations.append(Violation("lower", name, float(model.lb[j] - x[j])))
        if x[j] - model.ub[j] > tol:
            violations.append(Violation("upper", name, float(x[j] - model.ub[j])))
        if model.binary[j] and abs(x[j] - round(x[j])) > tol:
            violations.append(Violation("integrality", name, float(abs(x[j] - round(x[j])))))

    return violations

def _fmt_terms(ids, coefs, names):
    parts = []
    for k, (j, coef) in enumerate(zip(ids, coefs)):
        mag = "" if abs(coef) == 1.0 else "{} ".format(repr(float(abs(coef))))
        if k == 0 and coef > 0:
            parts.append("{}{}".format(mag, names[j]))
        else:
            parts.append("{} {}{}".format("-" if coef < 0 else "+", mag, names[j]))
    if len(parts) == 0:
        return "0"
    return " ".join(parts)

def dump_lp(model):
    '''Return the model in LP-style text, one constraint per line with its
    name, for cross-checking against an external solver.
    '''
    lines = ["\\ {}".format(model.name)]
    lines.append("Maximize" if model.sense == MAXIMIZE else "Minimize")
    nz = np.nonzero(model.c)[0]
    obj = _fmt_terms(nz, model.c[nz], model.var_names)
    if model.obj_const != 0.0:
        obj = "{} + {}".format(obj, repr(model.obj_const))
    lines.append(" obj: {}".format(obj))

    lines.append("Subject To")
    A = model.A.tocsr()
    for i in range(model.num_rows):
        start, stop = A.indptr[i], A.indptr[i+1]
        lhs = _fmt_terms(A.indices[start:stop], A.data[start:stop], model.var_names)
        lines.append(" {}: {} {} {}".format(model.row_names[i], lhs, model.senses[i], repr(float(model.rhs[i]))))

    lines.append("Bounds")
    for j, name in enumerate(model.var_names):
        if model.binary[j]:
            continue
        lo, hi = model.lb[j], model.ub[j]
        if math.isinf(lo) and math.isinf(hi):
            lines.append(" {} free".format(name))
        elif math.isinf(hi):
            lines.append(" {} >= {}".format(name, repr(float(lo))))
        elif math.isinf(lo):
            lines.append(" -inf <= {} <= {}".format(name, repr(float(hi))))
        else:
            lines.append(" {} <= {} <= {}".format(repr(float(lo)), name, repr(float(hi))))

    bins = [model.var_names[j] for j in np.where(model.binary)[0]]
    if len(bins) > 0:
        lines.append("Binaries")
        lines.append(" " + " ".join(bins))
    lines.append("End")

    return "\n".join(lines) + "\n"
