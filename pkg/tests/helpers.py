"""Shared test utilities: independent oracles and tiny instance corpora.

The enumeration routines here deliberately avoid the package's LP solver so
that LP-backed results can be cross-checked against an unrelated computation.
"""

from __future__ import annotations

import itertools

import numpy as np

from minmaxmin import (
    BinarySolution,
    BudgetedSet,
    ExplicitOracle,
    GuaranteeProfile,
    ProblemInstance,
    SolutionTuple,
    SupportFunc,
)
from minmaxmin.approx import evaluate


def enumerate_vertices(rows, dim, tol=1e-9):
    """Vertices of {x : a_i x <= b_i} by enumerating active-row subsets.

    rows: list of (coefficients, rhs).  Exponential; test-sized inputs only.
    """
    vertices = []
    A = np.array([a for a, _ in rows], dtype=float)
    b = np.array([r for _, r in rows], dtype=float)
    for combo in itertools.combinations(range(len(rows)), dim):
        M = A[list(combo)]
        rhs = b[list(combo)]
        if abs(np.linalg.det(M)) < tol:
            continue
        x = np.linalg.solve(M, rhs)
        if np.all(A @ x <= b + 1e-7):
            vertices.append(x)
    return vertices


def lp_max_by_vertices(objective, rows, dim):
    """max objective^T x over {a_i x <= b_i}; independent of the simplex code."""
    verts = enumerate_vertices(rows, dim)
    assert verts, "vertex enumeration found no feasible basis"
    objective = np.asarray(objective, dtype=float)
    return max(float(objective @ v) for v in verts)


def budget_polytope_vertices(n, gamma):
    """Vertices of {0 <= delta <= 1, sum(delta) <= gamma}.

    0/1 vectors with at most floor(gamma) ones, plus those with exactly
    floor(gamma) ones and one extra coordinate at the fractional remainder.
    """
    whole = int(np.floor(gamma))
    frac = gamma - whole
    verts = []
    for r in range(0, min(whole, n) + 1):
        for ones in itertools.combinations(range(n), r):
            v = np.zeros(n)
            v[list(ones)] = 1.0
            verts.append(v)
            if frac > 0 and r == whole:
                for j in range(n):
                    if j not in ones:
                        w = v.copy()
                        w[j] = frac
                        verts.append(w)
    return verts


def budgeted_worst_case_by_enumeration(uset: BudgetedSet, x):
    """max c^T x over a budgeted set via budget-polytope vertex enumeration."""
    x = np.asarray(x, dtype=float)
    best = -np.inf
    for delta in budget_polytope_vertices(uset.n, uset.budget):
        c = uset.mean + delta * uset.dev
        best = max(best, float(c @ x))
    return best


def maxmin_by_vertices(uset: BudgetedSet, columns):
    """max_{c in U} min_i c^T x^i by enumerating vertices of the lifted polytope.

    Lifts to (delta, z) space where the problem is linear, then enumerates.
    """
    n = uset.n
    rows = []
    for x in columns:
        a = np.concatenate([-(uset.dev * x.bits), [1.0]])
        rows.append((a, float(uset.mean @ x.bits)))
    rows.append((np.concatenate([np.ones(n), [0.0]]), uset.budget))
    for j in range(n):
        e = np.zeros(n + 1)
        e[j] = 1.0
        rows.append((e.copy(), 1.0))
        rows.append((-e, 0.0))
    obj = np.zeros(n + 1)
    obj[-1] = 1.0
    return lp_max_by_vertices(obj, rows, n + 1)


def budgeted_as_polytope_rows(uset: BudgetedSet):
    """Encode a budgeted set (with strictly positive dev) as {A c <= b} rows."""
    n = uset.n
    A_rows = []
    b_vals = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        A_rows.append(e.copy())
        b_vals.append(uset.mean[j] + uset.dev[j])
        A_rows.append(-e)
        b_vals.append(-uset.mean[j])
    scale = 1.0 / uset.dev
    A_rows.append(scale)
    b_vals.append(uset.budget + float(scale @ uset.mean))
    return np.array(A_rows), np.array(b_vals)


def unit_vectors(n):
    return [BinarySolution([1 if j == i else 0 for j in range(n)]) for i in range(n)]


def profile_from_enumeration(X, uset) -> GuaranteeProfile:
    supports = [x.support() for x in X]
    _, m_sup = uset.scenario_bounds()
    return GuaranteeProfile(
        M_inf=m_sup,
        m_inf=uset.componentwise_floor(),
        p_low=SupportFunc.const(min(supports)),
        p_high=SupportFunc.const(max(supports)),
    )


def make_tiny_instance(rng: np.random.RandomState, with_profile=True) -> ProblemInstance:
    """Random enumerable instance: |X| <= min(6, n), nonzero solutions only.

    Keeping |X| <= n makes the simplex-reweighting step produce at most n
    atoms, so the analytic guarantee certificates apply without slack.
    """
    n = int(rng.randint(4, 7))
    nx = int(rng.randint(2, min(6, n) + 1))
    sols = set()
    while len(sols) < nx:
        bits = tuple(int(v) for v in rng.randint(0, 2, n))
        if any(bits):
            sols.add(bits)
    X = [BinarySolution(list(b)) for b in sorted(sols)]
    mean = rng.randint(1, 11, n).astype(float)
    dev = rng.randint(1, 10, n).astype(float)
    gamma = float(rng.choice([0.5, 1.0, 1.5, 2.0, 2.5]))
    uset = BudgetedSet(mean, dev, gamma)
    profile = profile_from_enumeration(X, uset) if with_profile else None
    return ProblemInstance(n, ExplicitOracle(X), uset, profile=profile)


def spread_instance(n=4, dev=9.0, gamma=1.0) -> ProblemInstance:
    """Unit-vector instance with a large root gap: forces real branching."""
    X = unit_vectors(n)
    uset = BudgetedSet(np.ones(n), dev * np.ones(n), gamma)
    return ProblemInstance(n, ExplicitOracle(X), uset, profile=profile_from_enumeration(X, uset))


class TupleEvaluator:
    """Caches exact tuple values; duplicates inside a tuple are inert."""

    def __init__(self, instance: ProblemInstance):
        self.instance = instance
        self._cache = {}

    def value(self, columns) -> float:
        key = tuple(sorted({c.key for c in columns}))
        if key not in self._cache:
            self._cache[key] = evaluate(self.instance, SolutionTuple(list(columns)))[0]
        return self._cache[key]

    def brute(self, X, k: int) -> float:
        return min(
            self.value([X[i] for i in combo])
            for combo in itertools.combinations_with_replacement(range(len(X)), k)
        )

    def brute_under_fix(self, X, fix) -> float:
        """Exact optimum under per-slot fixations: product over filtered slots."""
        slot_candidates = []
        for z, o in fix.slots:
            cand = [
                x for x in X
                if all(not x.bits[j] for j in z) and all(x.bits[j] for j in o)
            ]
            if not cand:
                return np.inf
            slot_candidates.append(cand)
        return min(
            self.value(list(combo)) for combo in itertools.product(*slot_candidates)
        )
