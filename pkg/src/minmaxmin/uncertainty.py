"""Convex uncertainty sets and the adversarial worst-case oracle.

Two families are supported: the budgeted set
``{c : c_j = mean_j + delta_j * dev_j, 0 <= delta <= 1, sum(delta) <= budget}``
and a bounded polyhedron ``{c : A c <= b}``.  Both expose the LP builders
used by the column-generation master (maximize the worst case over a pool of
columns) and by the simplex-reweighting step (minimize the worst case over
convex weights).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .core import BinarySolution, DimensionMismatch, Scenario
from .lp import EQ, GEQ, LEQ, LinearProgram, LpSolution, NumericalError, solve_lp

MEMBER_TOL = 1e-9


def _as_fractional(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (n,):
        raise DimensionMismatch(f"expected a vector of length {n}, got shape {x.shape}")
    if x.min(initial=0.0) < -1e-9 or x.max(initial=0.0) > 1.0 + 1e-9:
        raise ValueError("point must lie in [0, 1]^n")
    return np.clip(x, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class BudgetedSet:
    """Budgeted uncertainty: mean costs, per-component deviations, total budget."""

    mean: np.ndarray
    dev: np.ndarray
    budget: float

    def __init__(self, mean, dev, budget: float):
        mean = np.ascontiguousarray(mean, dtype=np.float64)
        dev = np.ascontiguousarray(dev, dtype=np.float64)
        if mean.ndim != 1 or mean.shape != dev.shape:
            raise DimensionMismatch("mean and dev must be vectors of equal length")
        if dev.min(initial=0.0) < 0.0:
            raise ValueError("deviations must be nonnegative")
        budget = float(budget)
        if not 0.0 <= budget <= mean.shape[0]:
            raise ValueError(f"budget must lie in [0, n], got {budget}")
        mean.setflags(write=False)
        dev.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "dev", dev)
        object.__setattr__(self, "budget", budget)

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    def mean_scenario(self) -> Scenario:
        return Scenario(self.mean)

    def worst_case(self, x) -> Tuple[float, Scenario]:
        """max over the set of c^T x for a fractional x in [0,1]^n.

        Greedy: spend the budget on the largest dev_j * x_j terms, whole units
        first, the fractional remainder on the next one.  Ties break toward
        the lower index so results are reproducible.
        """
        x = _as_fractional(x, self.n)
        gains = self.dev * x
        order = np.argsort(-gains, kind="stable")
        delta = np.zeros(self.n)
        whole = int(np.floor(self.budget))
        frac = self.budget - whole
        take = min(whole, self.n)
        delta[order[:take]] = 1.0
        if frac > 0.0 and take < self.n:
            delta[order[take]] = frac
        costs = self.mean + delta * self.dev
        return float(costs @ x), Scenario(costs)

    def scenario_bounds(self) -> Tuple[float, float]:
        """Tight (m_inf, M_inf) with m_inf <= ||c||_inf <= M_inf over the set.

        The budget caps any single coordinate at mean + min(1, budget) * dev;
        the infinity norm is minimized at delta = 0 because dev >= 0.  With a
        negative mean entry the bounds fall back to interval arithmetic on
        |c_j|, where the norm floor is no longer exact, only valid.
        """
        lo = self.mean
        hi = self.mean + min(1.0, self.budget) * self.dev
        m_inf = float(np.max(np.where(lo * hi >= 0.0, np.minimum(np.abs(lo), np.abs(hi)), 0.0)))
        m_sup = float(np.max(np.maximum(np.abs(lo), np.abs(hi))))
        return m_inf, m_sup

    def componentwise_floor(self) -> float:
        """Largest m with c >= m * 1 for every c in the set (= min_j mean_j).

        The multiplicative guarantees need this componentwise floor; the norm
        floor from scenario_bounds is generally larger and must not be
        substituted for it.
        """
        return float(self.mean.min())

    def contains(self, c: Scenario, tol: float = MEMBER_TOL) -> bool:
        diff = c.costs - self.mean
        scale = max(1.0, float(np.abs(self.mean).max(initial=0.0) + self.dev.max(initial=0.0)))
        delta = np.zeros(self.n)
        for j in range(self.n):
            if self.dev[j] > 0.0:
                delta[j] = diff[j] / self.dev[j]
            elif abs(diff[j]) > tol * scale:
                return False
        if delta.min(initial=0.0) < -tol or delta.max(initial=0.0) > 1.0 + tol:
            return False
        return float(delta.sum()) <= self.budget + tol * max(1.0, self.n)

    # LP builders -----------------------------------------------------------

    def adversary_lp(self, columns: Sequence[BinarySolution]) -> LinearProgram:
        """max z  s.t.  z <= (mean + delta*dev)^T x for each column, delta budgeted.

        Variables: [delta_1..delta_n, z].
        """
        n = self.n
        rows = []
        for x in columns:
            a = np.concatenate([-(self.dev * x.bits), [1.0]])
            rows.append((a, LEQ, float(self.mean @ x.bits)))
        rows.append((np.concatenate([np.ones(n), [0.0]]), LEQ, self.budget))
        obj = np.zeros(n + 1)
        obj[-1] = 1.0
        bounds = [(0.0, 1.0)] * n + [(None, None)]
        return LinearProgram("max", obj, tuple(rows), tuple(bounds))

    def scenario_from_primal(self, primal: np.ndarray) -> Scenario:
        delta = np.clip(primal[: self.n], 0.0, 1.0)
        return Scenario(self.mean + delta * self.dev)

    def reweight_lp(self, columns: Sequence[BinarySolution]) -> LinearProgram:
        """min over simplex weights of the worst case, inner max dualized.

        Variables: [lambda_1..lambda_m, theta, rho_1..rho_n]; minimize
        sum_i lambda_i mean^T x^i + budget*theta + sum_j rho_j subject to
        theta + rho_j >= dev_j * (sum_i lambda_i x^i)_j.
        """
        n, m = self.n, len(columns)
        obj = np.concatenate(
            [[float(self.mean @ x.bits) for x in columns], [self.budget], np.ones(n)]
        )
        rows = []
        for j in range(n):
            a = np.zeros(m + 1 + n)
            for i, x in enumerate(columns):
                a[i] = -self.dev[j] * float(x.bits[j])
            a[m] = 1.0
            a[m + 1 + j] = 1.0
            rows.append((a, GEQ, 0.0))
        simplex = np.zeros(m + 1 + n)
        simplex[:m] = 1.0
        rows.append((simplex, EQ, 1.0))
        bounds = [(0.0, None)] * (m + 1 + n)
        return LinearProgram("min", obj, tuple(rows), tuple(bounds))


@dataclass(frozen=True, eq=False)
class PolytopeSet:
    """Polyhedral uncertainty {c : A c <= b}, checked nonempty and bounded."""

    A: np.ndarray
    b: np.ndarray

    def __init__(self, A, b):
        A = np.ascontiguousarray(A, dtype=np.float64)
        b = np.ascontiguousarray(b, dtype=np.float64)
        if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
            raise DimensionMismatch("A must be m x n and b of length m")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        lo, hi = self._component_box()
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)

    def _component_box(self):
        """2n LP solves: componentwise range of c over the polytope.

        Raises if the set is empty or unbounded (construction invariant).
        """
        n = self.n
        lo = np.empty(n)
        hi = np.empty(n)
        rows = tuple((self.A[i], LEQ, float(self.b[i])) for i in range(self.A.shape[0]))
        bounds = tuple((None, None) for _ in range(n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = 1.0
            for sense, out in (("min", lo), ("max", hi)):
                sol = solve_lp(LinearProgram(sense, e, rows, bounds))
                if sol.status == "infeasible":
                    raise ValueError("polytope uncertainty set is empty")
                if sol.status == "unbounded":
                    raise ValueError(f"polytope uncertainty set is unbounded in c_{j}")
                out[j] = sol.objective_value
        return lo, hi

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def mean_scenario(self) -> Scenario:
        """Midpoint of the componentwise box; a cheap deterministic interior-ish point."""
        return Scenario(0.5 * (self._lo + self._hi))

    def worst_case(self, x) -> Tuple[float, Scenario]:
        x = _as_fractional(x, self.n)
        rows = tuple((self.A[i], LEQ, float(self.b[i])) for i in range(self.A.shape[0]))
        bounds = tuple((None, None) for _ in range(self.n))
        sol = solve_lp(LinearProgram("max", x, rows, bounds))
        if sol.status != "optimal":
            raise NumericalError(f"worst-case LP over the polytope returned {sol.status}")
        return float(sol.objective_value), Scenario(sol.primal)

    def scenario_bounds(self) -> Tuple[float, float]:
        m_sup = float(np.max(np.maximum(np.abs(self._lo), np.abs(self._hi))))
        # min of ||c||_inf over the polytope is itself an LP: min t, -t <= c <= t
        n = self.n
        rows = [(np.concatenate([self.A[i], [0.0]]), LEQ, float(self.b[i])) for i in range(self.A.shape[0])]
        for j in range(n):
            e = np.zeros(n + 1)
            e[j], e[n] = 1.0, -1.0
            rows.append((e.copy(), LEQ, 0.0))
            e[j] = -1.0
            rows.append((e, LEQ, 0.0))
        obj = np.zeros(n + 1)
        obj[n] = 1.0
        bounds = tuple([(None, None)] * n + [(0.0, None)])
        sol = solve_lp(LinearProgram("min", obj, tuple(rows), bounds))
        if sol.status != "optimal":
            raise NumericalError("norm-floor LP failed")
        return float(sol.objective_value), m_sup

    def componentwise_floor(self) -> float:
        return float(self._lo.min())

    def contains(self, c: Scenario, tol: float = MEMBER_TOL) -> bool:
        scale = max(1.0, float(np.abs(self.b).max(initial=0.0)))
        return bool(np.all(self.A @ c.costs <= self.b + tol * scale))

    def adversary_lp(self, columns: Sequence[BinarySolution]) -> LinearProgram:
        """max z  s.t.  z <= c^T x per column, A c <= b.  Variables: [c, z]."""
        n = self.n
        rows = []
        for x in columns:
            a = np.concatenate([-x.bits.astype(np.float64), [1.0]])
            rows.append((a, LEQ, 0.0))
        for i in range(self.A.shape[0]):
            rows.append((np.concatenate([self.A[i], [0.0]]), LEQ, float(self.b[i])))
        obj = np.zeros(n + 1)
        obj[-1] = 1.0
        bounds = tuple([(None, None)] * (n + 1))
        return LinearProgram("max", obj, tuple(rows), bounds)

    def scenario_from_primal(self, primal: np.ndarray) -> Scenario:
        return Scenario(primal[: self.n])

    def reweight_lp(self, columns: Sequence[BinarySolution]) -> LinearProgram:
        """Dual of the inner max over {A c <= b}: min b^T mu with A^T mu = mixed point.

        Variables: [lambda_1..lambda_m, mu_1..mu_r].
        """
        n, m, r = self.n, len(columns), self.A.shape[0]
        obj = np.concatenate([np.zeros(m), self.b])
        rows = []
        for j in range(n):
            a = np.zeros(m + r)
            for i, x in enumerate(columns):
                a[i] = -float(x.bits[j])
            a[m:] = self.A[:, j]
            rows.append((a, EQ, 0.0))
        simplex = np.zeros(m + r)
        simplex[:m] = 1.0
        rows.append((simplex, EQ, 1.0))
        bounds = tuple([(0.0, None)] * (m + r))
        return LinearProgram("min", obj, tuple(rows), bounds)


def worst_case(uset, x) -> Tuple[float, Scenario]:
    """max_{c in U} c^T x together with a scenario attaining it."""
    return uset.worst_case(x)


def scenario_bounds(uset) -> Tuple[float, float]:
    """Bounds (m_inf, M_inf) on the infinity norm of scenarios in the set."""
    return uset.scenario_bounds()
