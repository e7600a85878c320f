"""Seeded random benchmark instances and their JSON serialization.

Reproducibility contract: all randomness flows through SplitMix64, a
well-known 64-bit mix generator that is trivial to reimplement in any
language.  A master seed spawns named substreams; substream i is a SplitMix64
seeded with the (i+1)-th output of SplitMix64(master_seed).  Integers in
{lo..hi} are drawn by rejection sampling (no modulo bias); uniforms in [0,1)
take the top 53 bits.  Substream assignments:

    knapsack:       0 = costs, 1 = weights, 2 = deviations
    shortest_path:  0 = coordinates, 1 + r = arc draw, retry r

File schema (version 1):
    {"schema": 1, "type": ..., "n": ..., "seed": ...,
     "data": {...}, "uncertainty": {"mean": [...], "dev": [...], "gamma": ...},
     "fixations": [{"zero": [...], "one": [...]}, ...]}   # optional
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import FixationSet, ProblemInstance
from .guarantees import GuaranteeProfile, SupportFunc
from .oracles import KnapsackOracle, ShortestPathOracle
from .uncertainty import BudgetedSet

SCHEMA_VERSION = 1
_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """Reference SplitMix64: state += golden; output = mix(state)."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in {lo..hi}, rejection-sampled against modulo bias."""
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            u = self.next_u64()
            if u < limit:
                return lo + (u % span)

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53


def substream(seed: int, index: int) -> SplitMix64:
    root = SplitMix64(seed)
    out = 0
    for _ in range(index + 1):
        out = root.next_u64()
    return SplitMix64(out)


class InstanceFormatError(ValueError):
    """Malformed instance file; the message names the offending location."""


@dataclass(frozen=True, eq=False)
class KnapsackInstance:
    n: int
    seed: int
    costs: np.ndarray  # mean costs, {1..100}
    weights: np.ndarray  # {1..100}
    capacity: int  # floor(0.35 * sum(weights))
    uncertainty: BudgetedSet
    fixations: Optional[FixationSet] = None

    @property
    def gamma(self) -> float:
        return self.uncertainty.budget

    def to_problem(self) -> ProblemInstance:
        oracle = KnapsackOracle(self.weights, self.capacity)
        order = np.argsort(-self.weights, kind="stable")
        acc, count = 0, 0
        for j in order:
            if acc >= self.capacity:
                break
            acc += int(self.weights[j])
            count += 1
        profile = GuaranteeProfile(
            M_inf=float((self.costs + self.uncertainty.dev).max()),
            m_inf=float(self.costs.min()),  # componentwise floor: c >= mean >= min mean
            p_low=SupportFunc.const(max(1, count)),
            p_high=SupportFunc.const(self.n),
        )
        return ProblemInstance(
            n=self.n, oracle=oracle, uset=self.uncertainty, profile=profile,
            name=f"knapsack-n{self.n}-s{self.seed}",
        )


@dataclass(frozen=True, eq=False)
class ShortestPathInstance:
    num_nodes: int
    seed: int
    coords: np.ndarray  # (|V|, 2) points in [0, 10]^2
    arcs: tuple  # directed (u, v)
    source: int
    sink: int
    uncertainty: BudgetedSet
    fixations: Optional[FixationSet] = None

    @property
    def n(self) -> int:
        return len(self.arcs)

    @property
    def gamma(self) -> float:
        return self.uncertainty.budget

    def to_problem(self) -> ProblemInstance:
        oracle = ShortestPathOracle(self.num_nodes, self.arcs, self.source, self.sink)
        hops = _min_hops(self.num_nodes, self.arcs, self.source, self.sink)
        profile = GuaranteeProfile(
            M_inf=float((self.uncertainty.mean + self.uncertainty.dev).max()),
            m_inf=float(self.uncertainty.mean.min()),
            p_low=SupportFunc.const(max(1, hops)),
            p_high=SupportFunc.const(min(self.num_nodes - 1, self.n)),
        )
        return ProblemInstance(
            n=self.n, oracle=oracle, uset=self.uncertainty, profile=profile,
            name=f"sp-V{self.num_nodes}-g{self.gamma:g}-s{self.seed}",
        )


def _min_hops(num_nodes, arcs, source, sink) -> int:
    out = {}
    for u, v in arcs:
        out.setdefault(u, []).append(v)
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in out.get(u, ()):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist.get(sink, num_nodes)


def gen_knapsack(n: int, seed: int) -> KnapsackInstance:
    """Covering knapsack with budgeted uncertainty.

    Costs and weights uniform on {1..100}, capacity 35% of the weight total,
    deviations uniform on {1..cost_j}, budget floor(n/20).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    rc = substream(seed, 0)
    rw = substream(seed, 1)
    rd = substream(seed, 2)
    costs = np.array([rc.randint(1, 100) for _ in range(n)], dtype=np.int64)
    weights = np.array([rw.randint(1, 100) for _ in range(n)], dtype=np.int64)
    capacity = int(math.floor(0.35 * float(weights.sum())))
    dev = np.array([rd.randint(1, int(c)) for c in costs], dtype=np.float64)
    gamma = float(n // 20)
    uset = BudgetedSet(costs.astype(np.float64), dev, gamma)
    return KnapsackInstance(
        n=n, seed=seed, costs=costs, weights=weights, capacity=capacity, uncertainty=uset
    )


def gen_shortest_path(
    num_nodes: int,
    gamma: float,
    seed: int,
    arc_prob: float = 0.5,
    max_retries: int = 100,
) -> ShortestPathInstance:
    """Random planar-point digraph with Euclidean mean costs and dev = mean/2.

    Each directed arc between a node pair is included independently with
    probability arc_prob; arc draws are retried with a fresh substream until
    the source reaches the sink.  The reference setting uses gamma in {3, 6}.
    """
    if num_nodes < 2:
        raise ValueError("need at least two nodes")
    if gamma not in (3, 6):
        warnings.warn(f"gamma={gamma} is outside the reference setting {{3, 6}}", stacklevel=2)
    rng = substream(seed, 0)
    coords = np.array([[10.0 * rng.uniform(), 10.0 * rng.uniform()] for _ in range(num_nodes)])
    source, sink = 0, num_nodes - 1

    for retry in range(max_retries):
        ra = substream(seed, 1 + retry)
        arcs = []
        for u in range(num_nodes):
            for v in range(u + 1, num_nodes):
                if ra.uniform() < arc_prob:
                    arcs.append((u, v))
                if ra.uniform() < arc_prob:
                    arcs.append((v, u))
        if arcs and _min_hops(num_nodes, arcs, source, sink) < num_nodes:
            break
    else:
        raise RuntimeError(f"no connected arc draw after {max_retries} retries")

    arcs = tuple(arcs)
    mean = np.array([float(np.linalg.norm(coords[u] - coords[v])) for u, v in arcs])
    dev = mean / 2.0
    uset = BudgetedSet(mean, dev, float(gamma))
    return ShortestPathInstance(
        num_nodes=num_nodes, seed=seed, coords=coords, arcs=arcs,
        source=source, sink=sink, uncertainty=uset,
    )


# serialization ---------------------------------------------------------------


def save(instance, path) -> None:
    if isinstance(instance, KnapsackInstance):
        doc = {
            "schema": SCHEMA_VERSION,
            "type": "knapsack",
            "n": instance.n,
            "seed": instance.seed,
            "data": {
                "costs": instance.costs.tolist(),
                "weights": instance.weights.tolist(),
                "capacity": instance.capacity,
            },
            "uncertainty": _uset_doc(instance.uncertainty),
        }
    elif isinstance(instance, ShortestPathInstance):
        doc = {
            "schema": SCHEMA_VERSION,
            "type": "shortest_path",
            "n": instance.n,
            "seed": instance.seed,
            "data": {
                "num_nodes": instance.num_nodes,
                "coords": instance.coords.tolist(),
                "arcs": [list(a) for a in instance.arcs],
                "source": instance.source,
                "sink": instance.sink,
            },
            "uncertainty": _uset_doc(instance.uncertainty),
        }
    else:
        raise TypeError(f"cannot serialize {type(instance).__name__}")
    if instance.fixations is not None:
        doc["fixations"] = [
            {"zero": sorted(z), "one": sorted(o)} for z, o in instance.fixations.slots
        ]
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _uset_doc(uset: BudgetedSet) -> dict:
    return {"mean": uset.mean.tolist(), "dev": uset.dev.tolist(), "gamma": uset.budget}


def _require(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise InstanceFormatError(f"{where}: {message}")


def load(path):
    """Load an instance file, validating fields with located error messages."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(
                f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    _require(isinstance(doc, dict), str(path), "top level must be an object")
    _require(doc.get("schema") == SCHEMA_VERSION, "schema", f"expected version {SCHEMA_VERSION}")
    kind = doc.get("type")
    _require(kind in ("knapsack", "shortest_path"), "type", f"unknown instance type {kind!r}")
    n = doc.get("n")
    _require(isinstance(n, int) and n >= 1, "n", "must be a positive integer")

    unc = doc.get("uncertainty")
    _require(isinstance(unc, dict), "uncertainty", "missing object")
    mean = unc.get("mean")
    dev = unc.get("dev")
    gamma = unc.get("gamma")
    _require(isinstance(mean, list) and len(mean) == n, "uncertainty.mean", f"need {n} entries")
    _require(isinstance(dev, list) and len(dev) == n, "uncertainty.dev", f"need {n} entries")
    _require(all(d >= 0 for d in dev), "uncertainty.dev", "deviations must be nonnegative")
    _require(isinstance(gamma, (int, float)) and 0 <= gamma <= n, "uncertainty.gamma", "must lie in [0, n]")
    uset = BudgetedSet(np.array(mean, dtype=np.float64), np.array(dev, dtype=np.float64), float(gamma))

    fixations = None
    if "fixations" in doc:
        raw = doc["fixations"]
        _require(isinstance(raw, list) and raw, "fixations", "must be a non-empty array")
        slots = []
        for i, slot in enumerate(raw):
            where = f"fixations[{i}]"
            _require(isinstance(slot, dict), where, "must be an object")
            zero = slot.get("zero", [])
            one = slot.get("one", [])
            _require(all(isinstance(j, int) and 0 <= j < n for j in zero + one), where, "indices out of range")
            overlap = set(zero) & set(one)
            _require(not overlap, where, f"zero/one overlap on indices {sorted(overlap)}")
            slots.append((frozenset(zero), frozenset(one)))
        fixations = FixationSet(tuple(slots))

    data = doc.get("data")
    _require(isinstance(data, dict), "data", "missing object")
    if kind == "knapsack":
        costs = data.get("costs")
        weights = data.get("weights")
        capacity = data.get("capacity")
        _require(isinstance(costs, list) and len(costs) == n, "data.costs", f"need {n} entries")
        _require(isinstance(weights, list) and len(weights) == n, "data.weights", f"need {n} entries")
        _require(all(isinstance(w, int) and w >= 0 for w in weights), "data.weights", "must be nonnegative integers")
        _require(isinstance(capacity, int) and capacity >= 0, "data.capacity", "must be a nonnegative integer")
        return KnapsackInstance(
            n=n, seed=int(doc.get("seed", 0)),
            costs=np.array(costs, dtype=np.int64),
            weights=np.array(weights, dtype=np.int64),
            capacity=capacity, uncertainty=uset, fixations=fixations,
        )
    num_nodes = data.get("num_nodes")
    _require(isinstance(num_nodes, int) and num_nodes >= 2, "data.num_nodes", "must be an integer >= 2")
    coords = data.get("coords")
    _require(isinstance(coords, list) and len(coords) == num_nodes, "data.coords", f"need {num_nodes} points")
    arcs = data.get("arcs")
    _require(isinstance(arcs, list) and len(arcs) == n, "data.arcs", f"need {n} arcs")
    for i, arc in enumerate(arcs):
        _require(
            isinstance(arc, list) and len(arc) == 2
            and all(isinstance(z, int) and 0 <= z < num_nodes for z in arc)
            and arc[0] != arc[1],
            f"data.arcs[{i}]", "must be a pair of distinct node indices",
        )
    source = data.get("source")
    sink = data.get("sink")
    _require(isinstance(source, int) and isinstance(sink, int), "data.source", "source/sink must be integers")
    return ShortestPathInstance(
        num_nodes=num_nodes, seed=int(doc.get("seed", 0)),
        coords=np.array(coords, dtype=np.float64),
        arcs=tuple((int(u), int(v)) for u, v in arcs),
        source=source, sink=sink, uncertainty=uset, fixations=fixations,
    )
