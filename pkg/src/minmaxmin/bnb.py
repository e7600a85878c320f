"""Exact branch & bound over k-tuples of feasible solutions.

Nodes carry per-slot variable fixations; bounding is the column-generation
relaxation, incumbents come from the approximation algorithm at the root and
from an averaging heuristic over the generated columns elsewhere.  Tuples are
invariant under slot permutation, so fixations are canonicalized and repeats
pruned.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .approx import approximate, evaluate
from .core import BinarySolution, FixationSet, ProblemInstance, SolutionTuple
from .lower_bound import (
    DEFAULT_TOL,
    InfeasibleSlotError,
    LowerBoundReport,
    hull_from_report,
    lower_bound,
)
from .oracles import enumerate_feasible

log = logging.getLogger(__name__)


class InfeasibleInstanceError(RuntimeError):
    """The instance has no feasible solution at all."""


class FullyFixedError(RuntimeError):
    """branch_select called on a node without a branchable position."""


@dataclass
class BnbConfig:
    time_limit: float = 60.0
    gap_tol: float = 1e-6
    node_cap: Optional[int] = None
    symmetry: bool = True
    cg_tol: float = DEFAULT_TOL
    log_interval: int = 0  # progress line every this many nodes; 0 disables


@dataclass(frozen=True)
class SolveStats:
    nodes_processed: int
    root_gap: float
    final_gap: float
    wall_time: float
    solved: bool
    stop_reason: str  # "optimal" | "time_limit" | "node_cap"


@dataclass(frozen=True)
class SolveResult:
    best: SolutionTuple
    value: float
    lb: float
    stats: SolveStats


@dataclass(frozen=True)
class Node:
    fix: FixationSet
    lb: float  # inherited from the parent's exact bound; sound for the subtree
    depth: int


def canonical_key(fix: FixationSet):
    """Slot-permutation-invariant key: sorted per-slot index sets, slots sorted."""
    encoded = [
        (tuple(sorted(z)), tuple(sorted(o)))
        for z, o in fix.slots
    ]
    return tuple(sorted(encoded))


def branch_select(report: LowerBoundReport, fix: FixationSet) -> Tuple[int, int]:
    """Pick (slot, variable) to branch on.

    Prefer an unfixed position j carried by a bound-tight column in some slot
    with positive worst-case cost: pinning it to zero perturbs the bound in
    that child.  Fall back to the first unfixed position, slots first.
    """
    c = report.worst_scenario.costs
    for slot, x in report.tight_columns:
        for j in np.nonzero(x.bits)[0]:
            j = int(j)
            if c[j] > 1e-9 and fix.is_free(slot, j):
                return slot, j
    n = c.shape[0]
    for slot in range(fix.k):
        for j in range(n):
            if fix.is_free(slot, j):
                return slot, j
    raise FullyFixedError("every position is fixed in every slot")


def node_heuristic(report: LowerBoundReport, k: int) -> SolutionTuple:
    """One column per slot, greedily chosen against the scenario pool.

    The first pick minimizes the average cost over all pooled scenarios; each
    later pick minimizes the average improvement it brings over the best
    already-selected value per scenario (improvements are <= 0, so the most
    negative wins).  Ties break toward the lower slot, then pool order.
    """
    pool = report.scenario_pool
    if not pool:
        raise ValueError("empty scenario pool")
    C = np.stack([s.costs for s in pool])
    vals = {}  # column key -> per-scenario costs
    for columns in report.slot_columns:
        for x in columns:
            if x.key not in vals:
                vals[x.key] = C @ x.bits

    chosen: dict = {}
    best_val = None
    first = None
    for slot in range(k):
        for x in report.slot_columns[slot]:
            avg = float(vals[x.key].mean())
            if first is None or avg < first[0] - 1e-12:
                first = (avg, slot, x)
    _, slot0, x0 = first
    chosen[slot0] = x0
    best_val = vals[x0.key].copy()

    for _ in range(k - 1):
        pick = None
        for slot in range(k):
            if slot in chosen:
                continue
            for x in report.slot_columns[slot]:
                gain = float(np.minimum(vals[x.key] - best_val, 0.0).mean())
                if pick is None or gain < pick[0] - 1e-12:
                    pick = (gain, slot, x)
        _, slot, x = pick
        chosen[slot] = x
        best_val = np.minimum(best_val, vals[x.key])
    return SolutionTuple([chosen[i] for i in range(k)])


def _gap(value: float, lb: float) -> float:
    return max(0.0, value - lb) / max(1.0, abs(value))


def solve(instance: ProblemInstance, k: int, config: Optional[BnbConfig] = None) -> SolveResult:
    """Solve the min-max-min problem exactly (to the configured gap).

    On timeout or node-cap exhaustion the incumbent and the global bound are
    still returned, with stats.solved False.
    """
    cfg = config or BnbConfig()
    t0 = time.perf_counter()
    root_fix = FixationSet.root(k)
    try:
        root_report = lower_bound(instance, k, root_fix, cfg.cg_tol)
    except InfeasibleSlotError as exc:
        raise InfeasibleInstanceError("the deterministic problem is infeasible") from exc

    hull = hull_from_report(instance, root_report, cfg.cg_tol)
    approx = approximate(instance, k, cfg.cg_tol, hull=hull)
    incumbent, inc_val = approx.tuple, approx.app_value
    root_lb = root_report.value
    root_gap = _gap(inc_val, root_lb)

    def slack(v: float) -> float:
        return cfg.gap_tol * max(1.0, abs(v))

    nodes = 1
    stop_reason = "optimal"
    global_lb = root_lb

    if inc_val - root_lb > slack(inc_val):
        h_tuple = node_heuristic(root_report, k)
        h_val, _ = evaluate(instance, h_tuple)
        if h_val < inc_val - 1e-12:
            incumbent, inc_val = h_tuple, h_val

    heap: list = []
    counter = itertools.count()
    seen_keys = {canonical_key(root_fix)}

    def push_children(report: LowerBoundReport, fix: FixationSet, depth: int) -> None:
        slot, j = branch_select(report, fix)
        for value in (0, 1):
            child = fix.fix(slot, j, value)
            if cfg.symmetry:
                key = canonical_key(child)
                if key in seen_keys:
                    continue
                seen_keys.add(key)
            heapq.heappush(heap, (report.value, -(depth + 1), next(counter), Node(child, report.value, depth + 1)))

    if inc_val - root_lb > slack(inc_val):
        push_children(root_report, root_fix, 0)

    while heap:
        if time.perf_counter() - t0 > cfg.time_limit:
            stop_reason = "time_limit"
            break
        if cfg.node_cap is not None and nodes >= cfg.node_cap:
            stop_reason = "node_cap"
            break
        _, _, _, node = heapq.heappop(heap)
        global_lb = max(global_lb, min(node.lb, inc_val))
        if node.lb >= inc_val - slack(inc_val):
            # best-first order: every remaining node is bounded out too
            heap.clear()
            break
        try:
            report = lower_bound(instance, k, node.fix, cfg.cg_tol)
        except InfeasibleSlotError:
            nodes += 1
            continue
        nodes += 1
        if cfg.log_interval and nodes % cfg.log_interval == 0:
            log.info(
                "nodes=%d lb=%.6g incumbent=%.6g gap=%.3g%% open=%d",
                nodes, global_lb, inc_val, 100 * _gap(inc_val, global_lb), len(heap),
            )
        if report.value >= inc_val - slack(inc_val):
            continue
        h_tuple = node_heuristic(report, k)
        h_val, _ = evaluate(instance, h_tuple)
        if h_val < inc_val - 1e-12:
            incumbent, inc_val = h_tuple, h_val
        if report.value >= inc_val - slack(inc_val):
            continue
        if node.fix.fully_fixed(instance.n):
            # singleton slots: the bound is exact here and the heuristic
            # already evaluated the unique tuple
            continue
        push_children(report, node.fix, node.depth)

    if stop_reason == "optimal":
        # tree fully explored (or every open node bounded out): optimal
        # within the gap tolerance, so the dual bound closes on the incumbent
        global_lb = inc_val
    else:
        global_lb = max(global_lb, min(min(entry[0] for entry in heap), inc_val))

    final_gap = _gap(inc_val, global_lb)
    solved = final_gap <= cfg.gap_tol
    stats = SolveStats(
        nodes_processed=nodes,
        root_gap=root_gap,
        final_gap=final_gap,
        wall_time=time.perf_counter() - t0,
        solved=solved,
        stop_reason="optimal" if solved else stop_reason,
    )
    return SolveResult(best=incumbent, value=inc_val, lb=global_lb, stats=stats)


def brute_force(instance: ProblemInstance, k: int, cap: int = 20):
    """Exact optimum by evaluating every k-multiset of the feasible set.

    Only for enumerable oracles with at most `cap` solutions; duplicates
    inside a multiset are inert so distinct column sets are priced once.
    """
    solutions = enumerate_feasible(instance.oracle, cap)
    cache: dict = {}
    best = None
    for combo in itertools.combinations_with_replacement(range(len(solutions)), k):
        cols = tuple(sorted({solutions[i].key for i in combo}))
        if cols not in cache:
            tup = SolutionTuple([solutions[i] for i in combo])
            cache[cols] = evaluate(instance, tup)[0]
        val = cache[cols]
        if best is None or val < best[0] - 1e-12:
            best = (val, combo)
    val, combo = best
    return SolutionTuple([solutions[i] for i in combo]), val
