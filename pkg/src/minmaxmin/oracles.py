"""Linear minimization oracles for the deterministic problem under fixations.

An oracle answers min c^T x over the feasible set X restricted to
X(J0, J1) = {x in X : x_j = 0 for j in J0, x_j = 1 for j in J1}.
Enumerable oracles additionally list all of X, which powers the brute-force
cross checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import BinarySolution, DimensionMismatch, Scenario
from .lp import NumericalError


class NotEnumerableError(RuntimeError):
    pass


class EnumerationCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleQuery:
    costs: np.ndarray
    fixed_zero: frozenset = frozenset()
    fixed_one: frozenset = frozenset()

    def __post_init__(self):
        costs = self.costs.costs if isinstance(self.costs, Scenario) else self.costs
        costs = np.ascontiguousarray(costs, dtype=np.float64)
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "fixed_zero", frozenset(self.fixed_zero))
        object.__setattr__(self, "fixed_one", frozenset(self.fixed_one))
        if self.fixed_zero & self.fixed_one:
            raise ValueError("fixed_zero and fixed_one overlap")


@dataclass(frozen=True)
class OracleAnswer:
    solution: Optional[BinarySolution]

    @property
    def feasible(self) -> bool:
        return self.solution is not None


def minimize(oracle, query: OracleQuery) -> OracleAnswer:
    """Run the oracle and assert the answer respects the query's fixations."""
    if query.costs.shape[0] != oracle.n:
        raise DimensionMismatch(
            f"cost vector has length {query.costs.shape[0]}, oracle dimension is {oracle.n}"
        )
    sol = oracle._minimize(query.costs, query.fixed_zero, query.fixed_one)
    if sol is None:
        return OracleAnswer(None)
    bits = sol.bits
    if any(bits[j] != 0 for j in query.fixed_zero) or any(bits[j] != 1 for j in query.fixed_one):
        raise NumericalError("oracle answer violates the requested fixations")
    return OracleAnswer(sol)


def enumerate_feasible(oracle, cap: int) -> List[BinarySolution]:
    """All of X, each solution exactly once; raises past `cap` entries."""
    if not getattr(oracle, "enumerable", False):
        raise NotEnumerableError(f"{type(oracle).__name__} cannot enumerate its feasible set")
    return oracle._enumerate(cap)


@dataclass(frozen=True, eq=False)
class ExplicitOracle:
    """Feasible set given as an explicit list (test instances)."""

    solutions: tuple
    enumerable = True

    def __init__(self, solutions: Sequence[BinarySolution]):
        solutions = tuple(solutions)
        if not solutions:
            raise ValueError("need at least one solution")
        n = solutions[0].n
        if any(s.n != n for s in solutions):
            raise DimensionMismatch("all solutions must share a dimension")
        object.__setattr__(self, "solutions", solutions)

    @property
    def n(self) -> int:
        return self.solutions[0].n

    def _minimize(self, costs, fz, fo):
        best = None
        best_val = np.inf
        for s in self.solutions:
            if any(s.bits[j] for j in fz) or any(not s.bits[j] for j in fo):
                continue
            val = float(costs @ s.bits)
            if val < best_val - 1e-15:
                best, best_val = s, val
        return best

    def _enumerate(self, cap):
        if len(self.solutions) > cap:
            raise EnumerationCapError(f"{len(self.solutions)} solutions exceed cap {cap}")
        return list(self.solutions)


@dataclass(frozen=True, eq=False)
class KnapsackOracle:
    """Covering knapsack min c^T x s.t. a^T x >= b over binary x.

    Solved by a dynamic program over the residual requirement.  Weights must
    be integral; costs may be fractional (scenarios are real-valued) and the
    DP never indexes on them.  Fixed-to-one items are pre-paid and deducted
    from the requirement, fixed-to-zero items removed, and any items with
    negative cost are always taken (they lower the cost and only help the
    covering constraint).
    """

    weights: np.ndarray
    capacity: int
    enumerable = True

    def __init__(self, weights, capacity: int):
        weights = np.ascontiguousarray(weights, dtype=np.int64)
        if weights.ndim != 1:
            raise ValueError("weights must be a vector")
        if weights.min(initial=0) < 0:
            raise ValueError("weights must be nonnegative")
        capacity = int(capacity)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "capacity", capacity)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def _minimize(self, costs, fz, fo):
        bits = np.zeros(self.n, dtype=np.uint8)
        residual = self.capacity
        for j in fo:
            bits[j] = 1
            residual -= int(self.weights[j])
        free = [j for j in range(self.n) if j not in fz and j not in fo]
        for j in list(free):
            if costs[j] < 0.0:
                bits[j] = 1
                residual -= int(self.weights[j])
                free.remove(j)
        residual = max(0, residual)
        if residual == 0:
            return BinarySolution(bits)
        if int(self.weights[free].sum()) < residual:
            return None

        # dp[r] = cheapest cost whose selected weights cover requirement r
        dp = np.full(residual + 1, np.inf)
        dp[0] = 0.0
        take = np.zeros((len(free), residual + 1), dtype=bool)
        for idx, j in enumerate(free):
            w = int(self.weights[j])
            cand = np.empty(residual + 1)
            if w >= residual:
                cand[:] = costs[j]  # the item alone covers any residual requirement
            else:
                cand[: w + 1] = costs[j] + dp[0]
                cand[w + 1 :] = costs[j] + dp[1 : residual + 1 - w]
            better = cand < dp - 1e-15
            take[idx] = better
            dp = np.where(better, cand, dp)
        if not np.isfinite(dp[residual]):
            return None
        r = residual
        for idx in range(len(free) - 1, -1, -1):
            if r == 0:
                break
            if take[idx, r]:
                j = free[idx]
                bits[j] = 1
                r = max(0, r - int(self.weights[j]))
        return BinarySolution(bits)

    def _enumerate(self, cap):
        out = []
        for mask in range(1 << self.n):
            bits = np.array([(mask >> j) & 1 for j in range(self.n)], dtype=np.uint8)
            if int(self.weights @ bits) >= self.capacity:
                out.append(BinarySolution(bits))
                if len(out) > cap:
                    raise EnumerationCapError(f"feasible set exceeds cap {cap}")
        return out


@dataclass(frozen=True, eq=False)
class ShortestPathOracle:
    """Simple s-t paths in a directed graph, one variable per arc.

    Fixed-to-zero arcs are deleted.  Fixed-to-one arcs get a large negative
    cost offset (big-M) and the search runs over walks of at most |V|-1 arcs
    with a label-correcting sweep tolerant of the induced negative costs; the
    recovered walk is then validated to be a simple path through every
    fixed-to-one arc, otherwise the query is reported infeasible.
    """

    num_nodes: int
    arcs: tuple
    source: int
    sink: int
    enumerable = True

    def __init__(self, num_nodes: int, arcs: Sequence[Tuple[int, int]], source: int, sink: int):
        arcs = tuple((int(u), int(v)) for u, v in arcs)
        num_nodes = int(num_nodes)
        for u, v in arcs:
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ValueError(f"arc ({u}, {v}) out of range")
            if u == v:
                raise ValueError("self-loops are not allowed")
        if len(set(arcs)) != len(arcs):
            raise ValueError("duplicate arcs")
        if not (0 <= source < num_nodes and 0 <= sink < num_nodes) or source == sink:
            raise ValueError("invalid source/sink")
        object.__setattr__(self, "num_nodes", num_nodes)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "sink", sink)

    @property
    def n(self) -> int:
        return len(self.arcs)

    def _minimize(self, costs, fz, fo):
        big_m = self.n * float(np.abs(costs).max(initial=0.0)) + 1.0
        adjusted = costs.astype(np.float64).copy()
        for j in fo:
            adjusted[j] -= big_m
        active = [j for j in range(self.n) if j not in fz]

        V = self.num_nodes
        inf = np.inf
        dist = np.full(V, inf)
        dist[self.source] = 0.0
        layers = [dist]
        preds = []
        for _ in range(V - 1):
            prev = layers[-1]
            cur = prev.copy()
            pred = np.full(V, -1, dtype=np.int64)
            for j in active:
                u, v = self.arcs[j]
                cand = prev[u] + adjusted[j]
                if cand < cur[v] - 1e-12:
                    cur[v] = cand
                    pred[v] = j
            layers.append(cur)
            preds.append(pred)
        if not np.isfinite(layers[-1][self.sink]):
            return None

        # walk back through the layers, preferring to stay when no improvement
        arcs_used = []
        v = self.sink
        r = V - 1
        while r > 0:
            if layers[r][v] == layers[r - 1][v] or preds[r - 1][v] < 0:
                r -= 1
                continue
            j = int(preds[r - 1][v])
            arcs_used.append(j)
            v = self.arcs[j][0]
            r -= 1
        arcs_used.reverse()
        if v != self.source:
            return None

        nodes = [self.arcs[j][0] for j in arcs_used] + [self.sink]
        if len(set(nodes)) != len(nodes):  # walk revisits a node: not a path
            return None
        if not set(fo) <= set(arcs_used):
            return None
        bits = np.zeros(self.n, dtype=np.uint8)
        bits[arcs_used] = 1
        return BinarySolution(bits)

    def _enumerate(self, cap):
        out_arcs: dict = {}
        for j, (u, v) in enumerate(self.arcs):
            out_arcs.setdefault(u, []).append(j)
        paths: List[BinarySolution] = []

        def dfs(node, visited, used):
            if node == self.sink:
                bits = np.zeros(self.n, dtype=np.uint8)
                bits[used] = 1
                paths.append(BinarySolution(bits))
                if len(paths) > cap:
                    raise EnumerationCapError(f"number of s-t paths exceeds cap {cap}")
                return
            for j in out_arcs.get(node, ()):
                v = self.arcs[j][1]
                if v in visited:
                    continue
                dfs(v, visited | {v}, used + [j])

        dfs(self.source, {self.source}, [])
        return paths
