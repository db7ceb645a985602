'''Dense two-phase revised simplex for the LP relaxations solved inside
branch-and-bound. Bounded variables are brought to standard form
(x >= 0, equality rows with slacks), the basis is refactorized with an LU
decomposition every iteration, and pricing falls back from Dantzig's rule to
Bland's rule after a run of degenerate pivots.
'''
import math
import logging
from dataclasses import dataclass
import numpy as np
import scipy.sparse as sp
from scipy.linalg import lu_factor, lu_solve

from rerp.milp.model import LE, EQ, GE, Status

logger = logging.getLogger(__name__)

_PIVOT_TOL = 1e-9
_DEGENERATE_STREAK = 50

@dataclass
class LpResult:
    status: Status
    x: np.ndarray = None
    objective: float = None
    iterations: int = 0

class _StandardForm(object):
    '''min c_s.y s.t. A_s y (senses) b_s, y >= 0 with x = offset + T y.'''
    def __init__(self, c, A, senses, rhs, lb, ub):
        n = len(c)
        offset = np.zeros(n)
        cols = []     # (original var, coefficient) for each y column
        bound_rows = []   # (y column, upper bound)
        for j in range(n):
            lo, hi = lb[j], ub[j]
            if math.isfinite(lo) and math.isfinite(hi) and hi - lo <= 0.0:
                offset[j] = lo
            elif math.isfinite(lo):
                offset[j] = lo
                cols.append((j, 1.0))
                if math.isfinite(hi):
                    bound_rows.append((len(cols) - 1, hi - lo))
            elif math.isfinite(hi):
                offset[j] = hi
                cols.append((j, -1.0))
            else:
                cols.append((j, 1.0))
                cols.append((j, -1.0))

        ns = len(cols)
        T = np.zeros((n, ns))
        for k, (j, coef) in enumerate(cols):
            T[j, k] = coef

        self.offset = offset
        self.T = T
        A = A.toarray() if sp.issparse(A) else np.asarray(A, dtype=np.float64)
        A_s = A.dot(T) if A.shape[0] > 0 else np.zeros((0, ns))
        b_s = np.asarray(rhs, dtype=np.float64) - (A.dot(offset) if A.shape[0] > 0 else 0.0)
        senses = list(senses)

        if len(bound_rows) > 0:
            extra = np.zeros((len(bound_rows), ns))
            for r, (k, width) in enumerate(bound_rows):
                extra[r, k] = 1.0
            A_s = np.vstack([A_s, extra])
            b_s = np.concatenate([b_s, [w for _, w in bound_rows]])
            senses += [LE] * len(bound_rows)

        # rows with negative rhs are flipped so every rhs is >= 0
        flip = {LE: GE, GE: LE, EQ: EQ}
        for i in range(len(b_s)):
            if b_s[i] < 0:
                A_s[i] = -A_s[i]
                b_s[i] = -b_s[i]
                senses[i] = flip[senses[i]]

        self.A = A_s
        self.b = b_s
        self.senses = senses
        self.c = np.asarray(c, dtype=np.float64).dot(T)
        self.const = float(np.dot(c, offset))

    def recover(self, y):
        return self.offset + self.T.dot(y)

def _iterate(A, b, cost, basis, allowed, max_iter, tol, iterations):
    '''Run revised simplex pivots from a feasible basis. basis is updated in
    place. Returns (status, iterations).
    '''
    use_bland = False
    streak = 0
    while True:
        lu = lu_factor(A[:, basis])
        xB = lu_solve(lu, b)
        y = lu_solve(lu, cost[basis], trans=1)
        d = cost - y.dot(A)
        d[basis] = 0.0

        candidates = np.where((d < -tol) & allowed)[0]
        if len(candidates) == 0:
            return Status.OPTIMAL, iterations
        if iterations >= max_iter:
            return Status.ITERATION_LIMIT, iterations

        if use_bland:
            q = candidates[0]
        else:
            q = candidates[np.argmin(d[candidates])]

        u = lu_solve(lu, A[:, q])
        rows = np.where(u > _PIVOT_TOL)[0]
        if len(rows) == 0:
            return Status.UNBOUNDED, iterations

        ratios = np.maximum(xB[rows], 0.0) / u[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol]
        leave = tied[np.argmin(np.asarray(basis)[tied])]

        if best <= tol:
            streak += 1
            if streak >= _DEGENERATE_STREAK and not use_bland:
                logger.debug("switching to Bland's rule after %d degenerate pivots", streak)
                use_bland = True
        else:
            streak = 0

        basis[leave] = q
        iterations += 1

def solve_lp(c, A, senses, rhs, lb, ub, max_iter=None, tol=1e-9):
    '''Minimize c.x subject to A x (senses) rhs, lb <= x <= ub.

    Returns an LpResult with status Optimal, Infeasible, Unbounded or
    IterationLimit; x and objective are set only when Optimal.
    '''
    form = _StandardForm(c, A, senses, rhs, lb, ub)
    m, ns = form.A.shape

    if m == 0:
        if np.any(form.c < -tol):
            return LpResult(Status.UNBOUNDED)
        x = form.recover(np.zeros(ns))
        return LpResult(Status.OPTIMAL, x, float(np.dot(c, x)), 0)

    # slack (+1 for <=, -1 for >=) then artificial columns for >= and = rows
    slack_rows = [i for i in range(m) if form.senses[i] != EQ]
    art_rows = [i for i in range(m) if form.senses[i] != LE]
    n_slack, n_art = len(slack_rows), len(art_rows)
    A = np.zeros((m, ns + n_slack + n_art))
    A[:, :ns] = form.A
    basis = [None] * m
    for k, i in enumerate(slack_rows):
        A[i, ns + k] = 1.0 if form.senses[i] == LE else -1.0
        if form.senses[i] == LE:
            basis[i] = ns + k
    for k, i in enumerate(art_rows):
        A[i, ns + n_slack + k] = 1.0
        basis[i] = ns + n_slack + k
    b = form.b.copy()
    N = A.shape[1]
    n_real = ns + n_slack
    if max_iter is None:
        max_iter = 50 * (m + N) + 1000

    iterations = 0
    if n_art > 0:
        cost1 = np.zeros(N)
        cost1[n_real:] = 1.0
        allowed = np.ones(N, dtype=bool)
        status, iterations = _iterate(A, b, cost1, basis, allowed, max_iter, tol, iterations)
        if status == Status.ITERATION_LIMIT:
            return LpResult(status, iterations=iterations)

        xB = lu_solve(lu_factor(A[:, basis]), b)
        infeas = sum(xB[i] for i in range(m) if basis[i] >= n_real)
        if infeas > 1e-7 * (1.0 + np.abs(b).max()):
            return LpResult(Status.INFEASIBLE, iterations=iterations)

        # drive zero-level artificials out of the basis; drop redundant rows
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] < n_real:
                continue
            lu = lu_factor(A[:, basis])
            e = np.zeros(m)
            e[i] = 1.0
            row = lu_solve(lu, e, trans=1).dot(A[:, :n_real])
            row[[k for k in basis if k < n_real]] = 0.0
            enter = np.where(np.abs(row) > 1e-7)[0]
            if len(enter) > 0:
                basis[i] = int(enter[0])
            else:
                keep[i] = False

        rows = np.where(keep)[0]
        A = A[rows][:, :n_real]
        b = b[rows]
        basis = [basis[i] for i in rows]

    cost2 = np.zeros(A.shape[1])
    cost2[:ns] = form.c
    allowed = np.ones(A.shape[1], dtype=bool)
    status, iterations = _iterate(A, b, cost2, basis, allowed, max_iter, tol, iterations)
    if status != Status.OPTIMAL:
        return LpResult(status, iterations=iterations)

    y = np.zeros(A.shape[1])
    if len(basis) > 0:
        y[basis] = np.maximum(lu_solve(lu_factor(A[:, basis]), b), 0.0)
    x = form.recover(y[:ns])
    return LpResult(Status.OPTIMAL, x, float(np.dot(c, x)), iterations)
