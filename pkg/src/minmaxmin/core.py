"""Shared domain types: solutions, tuples, fixations, scenarios, convex points.

All types are immutable after construction and safe to share across
concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

import numpy as np

SIMPLEX_SUM_TOL = 1e-9  # matches the LP solver's feasibility tolerance


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BinarySolution:
    """Dense incidence vector x in {0,1}^n of one feasible solution."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ValueError("bits must be a one-dimensional 0/1 vector")
        if bits.size and bits.max() > 1:
            raise ValueError("bits must contain only 0 and 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    def support(self) -> int:
        """Number of non-zero entries."""
        return int(self.bits.sum())

    @property
    def key(self) -> bytes:
        """Hashable identity of the bit pattern (used to deduplicate columns)."""
        return self.bits.tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, BinarySolution) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return "BinarySolution(%s)" % "".join(map(str, self.bits.tolist()))


@dataclass(frozen=True, eq=False)
class Scenario:
    """Cost vector c drawn from the uncertainty set."""

    costs: np.ndarray

    def __post_init__(self):
        costs = np.ascontiguousarray(self.costs, dtype=np.float64)
        if costs.ndim != 1:
            raise ValueError("costs must be a one-dimensional real vector")
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)

    @property
    def n(self) -> int:
        return self.costs.shape[0]

    def __repr__(self) -> str:
        return "Scenario(%s)" % np.array2string(self.costs, precision=6)


@dataclass(frozen=True, eq=False)
class SolutionTuple:
    """Ordered tuple (x^1, ..., x^k) of feasible solutions, one per slot."""

    slots: tuple

    def __init__(self, slots: Sequence[BinarySolution]):
        slots = tuple(slots)
        if not slots:
            raise ValueError("a solution tuple needs at least one slot")
        n = slots[0].n
        for s in slots:
            if s.n != n:
                raise DimensionMismatch("all slots must share the same dimension")
        object.__setattr__(self, "slots", slots)

    @property
    def k(self) -> int:
        return len(self.slots)

    @property
    def n(self) -> int:
        return self.slots[0].n

    def __iter__(self) -> Iterator[BinarySolution]:
        return iter(self.slots)

    def __len__(self) -> int:
        return len(self.slots)

    def __getitem__(self, i: int) -> BinarySolution:
        return self.slots[i]


@dataclass(frozen=True)
class FixationSet:
    """Per-slot index sets of variables fixed to 0 / fixed to 1.

    ``slots[i] = (zero_idx, one_idx)`` with disjoint frozensets.  The empty
    fixation (all sets empty) denotes the root node of the search tree.
    """

    slots: tuple

    def __post_init__(self):
        slots = tuple((frozenset(z), frozenset(o)) for z, o in self.slots)
        for i, (z, o) in enumerate(slots):
            if z & o:
                raise ValueError(f"slot {i}: fixed-to-0 and fixed-to-1 sets overlap: {sorted(z & o)}")
        object.__setattr__(self, "slots", slots)

    @classmethod
    def root(cls, k: int) -> "FixationSet":
        if k < 1:
            raise ValueError("need k >= 1 slots")
        return cls(tuple((frozenset(), frozenset()) for _ in range(k)))

    @property
    def k(self) -> int:
        return len(self.slots)

    def is_root(self) -> bool:
        return all(not z and not o for z, o in self.slots)

    def is_free(self, slot: int, j: int) -> bool:
        z, o = self.slots[slot]
        return j not in z and j not in o

    def fix(self, slot: int, j: int, value: int) -> "FixationSet":
        """Return a new fixation set with variable j of `slot` pinned to `value`."""
        z, o = self.slots[slot]
        if j in z or j in o:
            raise ValueError(f"variable {j} already fixed in slot {slot}")
        if value == 0:
            z = z | {j}
        elif value == 1:
            o = o | {j}
        else:
            raise ValueError("value must be 0 or 1")
        slots = list(self.slots)
        slots[slot] = (z, o)
        return FixationSet(tuple(slots))

    def fully_fixed(self, n: int) -> bool:
        return all(len(z) + len(o) == n for z, o in self.slots)

    def groups(self) -> dict:
        """Distinct fixations -> list of slot indices carrying them.

        Slots with identical fixations would produce identical oracle answers,
        so callers run one oracle per group instead of one per slot.
        """
        by_fix: dict = {}
        for i, pair in enumerate(self.slots):
            by_fix.setdefault(pair, []).append(i)
        return by_fix


@dataclass(frozen=True, eq=False)
class ConvexPoint:
    """A convex combination sum_i lambda_i x^i of feasible solutions."""

    columns: tuple
    weights: np.ndarray

    def __init__(self, columns: Sequence[BinarySolution], weights):
        columns = tuple(columns)
        weights = np.ascontiguousarray(weights, dtype=np.float64)
        if len(columns) != weights.shape[0]:
            raise DimensionMismatch("one weight per column required")
        if not columns:
            raise ValueError("a convex point needs at least one column")
        if weights.min(initial=0.0) < -SIMPLEX_SUM_TOL:
            raise ValueError("weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > SIMPLEX_SUM_TOL:
            raise ValueError(f"weights must sum to 1 (got {weights.sum()!r})")
        weights = np.clip(weights, 0.0, None)
        weights.setflags(write=False)
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class ProblemInstance:
    """A deterministic feasible set (via its oracle) plus an uncertainty set.

    `profile` optionally carries the problem-class constants feeding the
    analytic approximation guarantees.
    """

    n: int
    oracle: Any
    uset: Any
    profile: Any = None
    name: str = ""


def dot(c: Scenario, x: BinarySolution) -> float:
    """Inner product c^T x."""
    if c.n != x.n:
        raise DimensionMismatch(f"scenario has dimension {c.n}, solution {x.n}")
    return float(c.costs @ x.bits)


def mix(point: ConvexPoint) -> np.ndarray:
    """The fractional vector sum_i lambda_i x^i, componentwise in [0, 1]."""
    out = np.zeros(point.columns[0].n)
    for lam, col in zip(point.weights, point.columns):
        out += lam * col.bits
    return out
