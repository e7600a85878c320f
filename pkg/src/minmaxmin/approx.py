"""Polynomial-time approximation: solve the convex-hull problem, reweight the
generated columns over the simplex, and keep the k heaviest columns.

evaluate() prices any solution tuple exactly by solving the adversarial
max-min LP over its columns, so approximation values and branch-and-bound
incumbents share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import ProblemInstance, Scenario, SolutionTuple
from .guarantees import GuaranteeCertificate, certificate
from .lower_bound import DEFAULT_TOL, HullResult, solve_convex_hull
from .lp import NumericalError, solve_lp


@dataclass(frozen=True)
class ApproxResult:
    tuple: SolutionTuple
    app_value: float
    cert: Optional[GuaranteeCertificate]
    weights: np.ndarray  # reweighted simplex weights, column-generation order
    hull: HullResult


def evaluate(instance: ProblemInstance, tup: SolutionTuple) -> Tuple[float, Scenario]:
    """Exact value max_{c in U} min_i c^T x^i of a tuple, with the attaining scenario.

    Duplicate slots are inert: the LP sees each distinct column once.
    """
    if tup.n != instance.n:
        raise ValueError(f"tuple dimension {tup.n} does not match instance dimension {instance.n}")
    seen = set()
    columns = []
    for x in tup:
        if x.key not in seen:
            seen.add(x.key)
            columns.append(x)
    sol = solve_lp(instance.uset.adversary_lp(columns))
    if sol.status != "optimal":
        raise NumericalError(f"evaluation LP returned status {sol.status}")
    return float(sol.objective_value), instance.uset.scenario_from_primal(sol.primal)


def approximate(
    instance: ProblemInstance,
    k: int,
    tol: float = DEFAULT_TOL,
    hull: Optional[HullResult] = None,
) -> ApproxResult:
    """Return k solutions whose worst case provably tracks the optimum.

    Weights are sorted in decreasing order with ties broken by generation
    order; when fewer than k columns exist the heaviest column is repeated,
    which evaluate() treats as a no-op.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if hull is None:
        hull = solve_convex_hull(instance, tol)
    columns = hull.point.columns
    lam = hull.point.weights
    order = sorted(range(len(columns)), key=lambda i: (-lam[i], i))
    chosen = [columns[i] for i in order[:k]]
    while len(chosen) < k:
        chosen.append(chosen[0])
    tup = SolutionTuple(chosen)
    app_value, _ = evaluate(instance, tup)
    cert = certificate(instance.profile, instance.n, k) if instance.profile is not None else None
    weights = np.array([lam[i] for i in range(len(columns))])
    return ApproxResult(tuple=tup, app_value=app_value, cert=cert, weights=weights, hull=hull)
