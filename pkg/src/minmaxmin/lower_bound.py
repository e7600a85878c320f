"""Column-generation lower bound under variable fixations.

The bound swaps the outer minimum with the adversarial maximum, giving

    max { z : z <= c^T x  for all x in X(J0^i, J1^i), all slots i,  c in U }

whose constraints are generated on the fly: the master LP is solved over the
pooled columns, then one oracle call per distinct slot fixation either proves
optimality or produces a violated column.  With no fixations and one slot
this is exactly the convex-hull problem min over conv(X) of the worst case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BinarySolution, ConvexPoint, FixationSet, ProblemInstance, Scenario
from .lp import NumericalError, solve_lp
from .oracles import OracleQuery, minimize

DEFAULT_TOL = 1e-6
TIGHT_TOL = 1e-6
_SCENARIO_DEDUP_TOL = 1e-9


class InfeasibleSlotError(RuntimeError):
    """X(J0, J1) is empty for some slot; the node cannot host any tuple."""

    def __init__(self, slot: int):
        super().__init__(f"slot {slot} has no feasible solution under its fixations")
        self.slot = slot


class IterationLimitError(RuntimeError):
    """Generation did not converge within the iteration cap (numerical trouble)."""


class CertificationError(NumericalError):
    """The two ways of computing the convex-hull value disagree."""


@dataclass(frozen=True)
class LowerBoundReport:
    """Result of one lower-bound computation.

    slot_columns[i] holds the generated candidates respecting slot i's
    fixations (slots with identical fixations share one pool).  The scenario
    pool collects every master-optimal scenario; tight_columns lists the
    (slot, column) pairs attaining the bound, which drive branching.
    """

    value: float
    worst_scenario: Scenario
    slot_columns: tuple
    scenario_pool: tuple
    tight_columns: tuple
    iterations: int


def lower_bound(
    instance: ProblemInstance,
    k: int,
    fix: Optional[FixationSet] = None,
    tol: float = DEFAULT_TOL,
    max_iterations: Optional[int] = None,
) -> LowerBoundReport:
    """Exact optimum of the max-min relaxation under the given fixations.

    One oracle call per distinct slot fixation per iteration; duplicate
    fixations are served by a shared column pool.  Raises InfeasibleSlotError
    when some slot admits no solution and IterationLimitError if the cap
    (default 10n) is hit before the stopping rule fires.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if fix is None:
        fix = FixationSet.root(k)
    if fix.k != k:
        raise ValueError(f"fixation set has {fix.k} slots, expected {k}")
    cap = max_iterations if max_iterations is not None else max(20, 10 * instance.n)

    oracle, uset = instance.oracle, instance.uset
    groups = list(fix.groups().items())  # [(fixation pair, [slot indices])]

    pools: list = []
    pool_keys: list = []
    mean = uset.mean_scenario()
    for gi, ((fz, fo), slots) in enumerate(groups):
        ans = minimize(oracle, OracleQuery(mean, fz, fo))
        if not ans.feasible:
            raise InfeasibleSlotError(slots[0])
        pools.append([ans.solution])
        pool_keys.append({ans.solution.key})

    scenario_pool: list = []
    prev_value = np.inf
    iterations = 0
    while True:
        seen = set()
        union: list = []
        for pool in pools:
            for x in pool:
                if x.key not in seen:
                    seen.add(x.key)
                    union.append(x)
        sol = solve_lp(uset.adversary_lp(union))
        if sol.status != "optimal":
            raise NumericalError(f"master LP returned status {sol.status}")
        value = float(sol.objective_value)
        c_star = uset.scenario_from_primal(sol.primal)
        iterations += 1
        if value > prev_value + 1e-9 * max(1.0, abs(prev_value)):
            raise NumericalError(
                f"master value increased from {prev_value} to {value}; the master only gains constraints"
            )
        prev_value = value
        if not any(
            float(np.abs(s.costs - c_star.costs).max()) <= _SCENARIO_DEDUP_TOL for s in scenario_pool
        ):
            scenario_pool.append(c_star)

        stopped = True
        for gi, ((fz, fo), slots) in enumerate(groups):
            ans = minimize(oracle, OracleQuery(c_star, fz, fo))
            if not ans.feasible:  # cannot happen: the group was feasible at init
                raise InfeasibleSlotError(slots[0])
            xbar = ans.solution
            if float(c_star.costs @ xbar.bits) < value - tol:
                stopped = False
            if xbar.key not in pool_keys[gi]:
                pool_keys[gi].add(xbar.key)
                pools[gi].append(xbar)
        if stopped:
            break
        if iterations >= cap:
            raise IterationLimitError(
                f"no convergence after {iterations} iterations (cap {cap})"
            )

    slot_to_group = {}
    for gi, (_, slots) in enumerate(groups):
        for s in slots:
            slot_to_group[s] = gi
    slot_columns = tuple(tuple(pools[slot_to_group[i]]) for i in range(k))
    tight_scale = max(1.0, abs(value))
    tight = tuple(
        (i, x)
        for i in range(k)
        for x in slot_columns[i]
        if abs(float(c_star.costs @ x.bits) - value) <= TIGHT_TOL * tight_scale
    )
    return LowerBoundReport(
        value=value,
        worst_scenario=c_star,
        slot_columns=slot_columns,
        scenario_pool=tuple(scenario_pool),
        tight_columns=tight,
        iterations=iterations,
    )


@dataclass(frozen=True)
class HullResult:
    """Certified solution of min over conv(X) of the worst case."""

    value: float
    point: ConvexPoint
    report: LowerBoundReport


def reweight(instance: ProblemInstance, columns, tol: float = DEFAULT_TOL):
    """Optimal simplex weights over a fixed column pool and their value.

    Solves min over the simplex of max_{c in U} c^T (sum_i lambda_i x^i) with
    the inner maximum dualized by the uncertainty set.
    """
    sol = solve_lp(instance.uset.reweight_lp(columns))
    if sol.status != "optimal":
        raise NumericalError(f"reweighting LP returned status {sol.status}")
    lam = np.clip(sol.primal[: len(columns)], 0.0, None)
    total = float(lam.sum())
    if abs(total - 1.0) > 1e-6:
        raise NumericalError(f"reweighting weights sum to {total}")
    return lam / total, float(sol.objective_value)


def solve_convex_hull(instance: ProblemInstance, tol: float = DEFAULT_TOL) -> HullResult:
    """Convex-hull optimum with a two-sided certificate.

    Runs the fixation-free single-slot bound, then re-derives the same value
    by optimally reweighting the generated columns; the two paths must agree
    within tol.
    """
    report = lower_bound(instance, 1, FixationSet.root(1), tol)
    return hull_from_report(instance, report, tol)


def hull_from_report(instance: ProblemInstance, report: LowerBoundReport, tol: float = DEFAULT_TOL) -> HullResult:
    """Build the certified hull result from an existing fixation-free report."""
    columns = report.slot_columns[0]
    lam, rw_value = reweight(instance, columns, tol)
    if abs(rw_value - report.value) > tol * max(1.0, abs(report.value)):
        raise CertificationError(
            f"master value {report.value} and reweighted value {rw_value} disagree beyond {tol}"
        )
    return HullResult(value=report.value, point=ConvexPoint(columns, lam), report=report)
