"""Dense linear programming via two-phase primal simplex.

Deterministic by construction: Dantzig pricing with lowest-index tie breaks,
falling back to Bland's rule once a pivot budget is exhausted so cycling
cannot occur.  All LPs in this package are small and dense, so a tableau
method is both simple and fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

FEAS_TOL = 1e-9
COST_TOL = 1e-9
_PHASE1_TOL = 1e-7

LEQ, EQ, GEQ = "<=", "=", ">="


class SimplexLimitError(RuntimeError):
    """Pivot budget exhausted.  Signals numerical trouble, never a status."""


class NumericalError(RuntimeError):
    """The solver produced an internally inconsistent result."""


@dataclass(frozen=True)
class LinearProgram:
    """min/max objective^T x subject to rows and per-variable bounds.

    rows: tuple of (coefficients, relation, rhs) with relation in {<=, =, >=}.
    bounds: tuple of (lo, hi) per variable; None means that side is free.
    """

    sense: str
    objective: np.ndarray
    rows: tuple
    bounds: tuple

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        obj = np.ascontiguousarray(self.objective, dtype=np.float64)
        obj.setflags(write=False)
        object.__setattr__(self, "objective", obj)
        n = obj.shape[0]
        rows = []
        for a, rel, rhs in self.rows:
            a = np.ascontiguousarray(a, dtype=np.float64)
            if a.shape[0] != n:
                raise ValueError("row length does not match variable count")
            if rel not in (LEQ, EQ, GEQ):
                raise ValueError(f"unknown relation {rel!r}")
            a.setflags(write=False)
            rows.append((a, rel, float(rhs)))
        object.__setattr__(self, "rows", tuple(rows))
        bounds = tuple((lo, hi) for lo, hi in self.bounds)
        if len(bounds) != n:
            raise ValueError("one (lo, hi) pair per variable required")
        for lo, hi in bounds:
            if lo is not None and hi is not None and lo > hi:
                raise ValueError("lower bound exceeds upper bound")
        object.__setattr__(self, "bounds", bounds)

    @property
    def n(self) -> int:
        return self.objective.shape[0]


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    primal: Optional[np.ndarray]
    objective_value: Optional[float]


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    T[:, j] = 0.0
    T[r, j] = 1.0


def _run_simplex(T, basis, priced_cols, dantzig_budget, hard_budget):
    """Minimize the objective row over the tableau.  Returns a status string.

    priced_cols is the number of leading columns eligible to enter the basis
    (artificials sit at the end and are excluded in phase 2).
    """
    pivots = 0
    m = T.shape[0] - 1
    while True:
        red = T[-1, :priced_cols]
        if pivots < dantzig_budget:
            j = int(np.argmin(red))
            if red[j] >= -COST_TOL:
                return "optimal"
        else:  # Bland: first improving column
            cand = np.nonzero(red < -COST_TOL)[0]
            if cand.size == 0:
                return "optimal"
            j = int(cand[0])
        col = T[:m, j]
        pos = col > FEAS_TOL
        if not pos.any():
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.nonzero(ratios <= best + 1e-12)[0]
        if pivots < dantzig_budget:
            r = int(ties[0])
        else:  # Bland: leave the variable with the smallest index
            r = int(ties[np.argmin(basis[ties])])
        _pivot(T, r, j)
        basis[r] = j
        pivots += 1
        if pivots % 64 == 0:
            T[np.abs(T) < 1e-13] = 0.0
        if pivots > hard_budget:
            raise SimplexLimitError(f"pivot budget {hard_budget} exhausted")


def _standardize(lp: LinearProgram):
    """Rewrite as min c_s^T u, A u (<=,=) b with u >= 0.

    Returns (c_s, row data, var map).  var map entry j is (offset, [(col, sign), ...])
    so that x_j = offset + sum sign * u_col.
    """
    var_map = []
    ncols = 0
    for lo, hi in lp.bounds:
        if lo is None and hi is None:
            var_map.append((0.0, [(ncols, 1.0), (ncols + 1, -1.0)]))
            ncols += 2
        elif lo is not None:
            var_map.append((float(lo), [(ncols, 1.0)]))
            ncols += 1
        else:  # only an upper bound: x = hi - u
            var_map.append((float(hi), [(ncols, -1.0)]))
            ncols += 1

    rows = []
    for a, rel, rhs in lp.rows:
        coeffs = np.zeros(ncols)
        shift = 0.0
        for j in range(lp.n):
            if a[j] == 0.0:
                continue
            offset, cols = var_map[j]
            shift += a[j] * offset
            for col, sign in cols:
                coeffs[col] += a[j] * sign
        rows.append((coeffs, rel, rhs - shift))
    # finite upper bounds on shifted variables become explicit rows
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None and hi is not None:
            offset, cols = var_map[j]
            coeffs = np.zeros(ncols)
            coeffs[cols[0][0]] = 1.0
            rows.append((coeffs, LEQ, float(hi) - float(lo)))

    c_s = np.zeros(ncols)
    sign = 1.0 if lp.sense == "min" else -1.0
    for j in range(lp.n):
        cj = lp.objective[j]
        if cj == 0.0:
            continue
        _, cols = var_map[j]
        for col, s in cols:
            c_s[col] += sign * cj * s
    return c_s, rows, var_map


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Solve with two-phase primal simplex.

    Statuses are reported faithfully; a numerically stuck solve raises
    SimplexLimitError instead of returning a wrong status.
    """
    c_s, rows, var_map = _standardize(lp)
    nstruct = c_s.shape[0]
    m = len(rows)

    # slack columns; remember which rows still need an artificial
    A = np.zeros((m, nstruct + m))
    b = np.zeros(m)
    need_art = []
    for i, (coeffs, rel, rhs) in enumerate(rows):
        A[i, :nstruct] = coeffs
        b[i] = rhs
        if rel == LEQ:
            A[i, nstruct + i] = 1.0
        elif rel == GEQ:
            A[i, nstruct + i] = -1.0
        if b[i] < 0.0:
            A[i] = -A[i]
            b[i] = -b[i]
        slack_ok = rel == LEQ and rhs >= 0.0
        if not slack_ok:
            need_art.append(i)

    nslack = m
    base_cols = nstruct + nslack
    nart = len(need_art)
    ncols = base_cols + nart
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :base_cols] = A
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.int64)

    dantzig_budget = 20 * (m + ncols) + 500
    hard_budget = 200 * (m + ncols) + 20000

    if nart:
        for pos, i in enumerate(need_art):
            T[i, base_cols + pos] = 1.0
            basis[i] = base_cols + pos
        for i in range(m):
            if i not in need_art:
                basis[i] = nstruct + i
        # phase-1 objective: sum of artificials, priced out over the basis
        T[-1, base_cols:ncols] = 1.0
        for i in need_art:
            T[-1] -= T[i]
        status = _run_simplex(T, basis, ncols, dantzig_budget, hard_budget)
        if status != "optimal":
            raise NumericalError("phase 1 cannot be unbounded")
        if T[-1, -1] < -_PHASE1_TOL:
            return LpSolution("infeasible", None, None)
        # drive remaining artificials out of the basis at level zero
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= base_cols:
                row = T[i, :base_cols]
                nz = np.nonzero(np.abs(row) > _PHASE1_TOL)[0]
                if nz.size:
                    _pivot(T, i, int(nz[0]))
                    basis[i] = int(nz[0])
                else:
                    keep[i] = False  # redundant row
        if not keep.all():
            T = np.vstack([T[:m][keep], T[-1:]])
            basis = basis[keep]
            m = int(keep.sum())
    else:
        basis[:] = nstruct + np.arange(m)

    # phase 2
    T[-1, :] = 0.0
    T[-1, :nstruct] = c_s
    for i in range(m):
        cb = T[-1, basis[i]]
        if cb != 0.0:
            T[-1] -= cb * T[i]
    status = _run_simplex(T, basis, base_cols, dantzig_budget, hard_budget)
    if status == "unbounded":
        return LpSolution("unbounded", None, None)

    u = np.zeros(ncols)
    u[basis] = T[:m, -1]
    x = np.empty(lp.n)
    for j, (offset, cols) in enumerate(var_map):
        x[j] = offset + sum(sign * u[col] for col, sign in cols)
    _verify(lp, x)
    value = float(lp.objective @ x)
    return LpSolution("optimal", x, value)


def _verify(lp: LinearProgram, x: np.ndarray, tol: float = 1e-7) -> None:
    scale = max(1.0, float(np.abs(x).max(initial=0.0)))
    for a, rel, rhs in lp.rows:
        lhs = float(a @ x)
        if rel == LEQ and lhs > rhs + tol * scale:
            raise NumericalError(f"row violated: {lhs} <= {rhs}")
        if rel == GEQ and lhs < rhs - tol * scale:
            raise NumericalError(f"row violated: {lhs} >= {rhs}")
        if rel == EQ and abs(lhs - rhs) > tol * scale:
            raise NumericalError(f"row violated: {lhs} == {rhs}")
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None and x[j] < lo - tol * scale:
            raise NumericalError(f"bound violated: x[{j}] >= {lo}")
        if hi is not None and x[j] > hi + tol * scale:
            raise NumericalError(f"bound violated: x[{j}] <= {hi}")
