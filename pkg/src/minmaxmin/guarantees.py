"""Closed-form approximation guarantees and k-adaptability policy counts.

All calculators are driven by a GuaranteeProfile: scenario norm bounds
(M_inf, m_inf) and problem-class support-size bounds p_low(n) <= ||x||_0 <=
p_high(n).  The central constants are

    M(n)  = M_inf * p_high(n) - m_inf * p_low(n)      (additive bounds)
    Mt(n) = (M_inf / m_inf) * (p_high(n) / p_low(n))  (multiplicative bounds)

Caution on m_inf: the additive and multiplicative bounds are only rigorous
when m_inf is a componentwise floor (c >= m_inf * 1 for every scenario), which
is generally smaller than the infinity-norm floor reported by
uncertainty.scenario_bounds.  Profiles built from instances in this package
therefore use the componentwise floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional


@dataclass(frozen=True)
class SupportFunc:
    """Support-size bound as a function of the dimension n.

    One of: a constant, log n, C * n^(1-delta), or an exact per-n table.
    """

    kind: str
    value: float = 0.0
    coeff: float = 1.0
    delta: float = 0.0
    table: Optional[dict] = None

    @classmethod
    def const(cls, v: float) -> "SupportFunc":
        return cls("const", value=float(v))

    @classmethod
    def log(cls) -> "SupportFunc":
        return cls("log")

    @classmethod
    def power(cls, coeff: float = 1.0, delta: float = 0.0) -> "SupportFunc":
        """coeff * n^(1 - delta); delta=0.5 gives the sqrt(n) family."""
        return cls("power", coeff=float(coeff), delta=float(delta))

    @classmethod
    def sqrt(cls, coeff: float = 1.0) -> "SupportFunc":
        return cls.power(coeff, 0.5)

    @classmethod
    def exact(cls, table: dict) -> "SupportFunc":
        return cls("table", table=dict(table))

    def __call__(self, n: int) -> float:
        if self.kind == "const":
            return self.value
        if self.kind == "log":
            return math.log(n)
        if self.kind == "power":
            return self.coeff * n ** (1.0 - self.delta)
        if self.kind == "table":
            try:
                return float(self.table[n])
            except KeyError:
                raise ValueError(f"support table has no entry for n={n}") from None
        raise ValueError(f"unknown support function kind {self.kind!r}")


@dataclass(frozen=True)
class GuaranteeProfile:
    """Problem-class constants feeding every analytic bound."""

    M_inf: float
    m_inf: float
    p_low: SupportFunc
    p_high: SupportFunc

    def __post_init__(self):
        if not (0.0 < self.m_inf <= self.M_inf):
            raise ValueError("need 0 < m_inf <= M_inf")

    def supports(self, n: int):
        lo, hi = self.p_low(n), self.p_high(n)
        if not (lo <= hi <= n):
            raise ValueError(f"support bounds ({lo}, {hi}) invalid for n={n}")
        return lo, hi

    @classmethod
    def from_ratio(cls, m_tilde: float) -> "GuaranteeProfile":
        """Profile carrying only the ratio Mt = M_inf/m_inf with equal supports."""
        return cls(float(m_tilde), 1.0, SupportFunc.const(1), SupportFunc.const(1))


@dataclass(frozen=True)
class GuaranteeCertificate:
    """Bound certificate attached to an approximation run."""

    additive: float
    multiplicative: Optional[float]
    valid_k_range: tuple

    def __post_init__(self):
        if self.additive < 0:
            raise ValueError("additive bound must be nonnegative")
        if self.multiplicative is not None and self.multiplicative < 1.0:
            raise ValueError("multiplicative factor must be at least 1")


def big_m(profile: GuaranteeProfile, n: int, conservative: bool = False) -> float:
    """M(n) = M_inf*p_high(n) - m_inf*p_low(n); `conservative` drops the subtrahend."""
    lo, hi = profile.supports(n)
    if conservative:
        return profile.M_inf * hi
    return profile.M_inf * hi - profile.m_inf * lo


def m_tilde(profile: GuaranteeProfile, n: int) -> float:
    """Mt(n) = (M_inf/m_inf) * (p_high(n)/p_low(n)); needs m_inf > 0 and p_low >= 1."""
    lo, hi = profile.supports(n)
    if profile.m_inf <= 0.0:
        raise ValueError("multiplicative bounds need m_inf > 0")
    if lo < 1.0:
        raise ValueError("multiplicative bounds need p_low(n) >= 1")
    return (profile.M_inf / profile.m_inf) * (hi / lo)


def additive_bound(
    profile: GuaranteeProfile, n: int, s: int, k: int, conservative: bool = False
) -> float:
    """Upper bound on opt(s) - opt(k) for s < k <= n: M(n) * (k - s) / (s + 1)."""
    if not s < k <= n:
        raise ValueError(f"need s < k <= n, got s={s}, k={k}, n={n}")
    return big_m(profile, n, conservative) * (k - s) / (s + 1)


def multiplicative_bound(profile: GuaranteeProfile, n: int, s: int, k: int) -> float:
    """Factor f with opt(s) <= f * opt(k) for s < k <= n: 1 + Mt(n)(k-s)/(s+1)."""
    if not s < k <= n:
        raise ValueError(f"need s < k <= n, got s={s}, k={k}, n={n}")
    return 1.0 + m_tilde(profile, n) * (k - s) / (s + 1)


def max_l_additive(profile: GuaranteeProfile, n: int, a: float, conservative: bool = False) -> int:
    """Largest l such that k = n - l keeps the additive guarantee at most a."""
    if a < 0:
        raise ValueError("guarantee must be nonnegative")
    m = big_m(profile, n, conservative)
    return int(math.floor(min(n - 1, a * n / (m + a))) if m + a > 0 else n - 1)


def min_q_multiplicative(profile: GuaranteeProfile, n: int, a: float) -> float:
    """Smallest fraction q such that k = q*n keeps the multiplicative guarantee <= a."""
    if a < 0:
        raise ValueError("guarantee must be nonnegative")
    mt = m_tilde(profile, n)
    return mt / (mt + a)


def n_threshold(l: int, delta: float, C: float, M_inf: float, eps: float) -> float:
    """Dimension above which dropping l solutions costs at most eps.

    Requires support growth p_high(n) <= C * n^(1-delta); the threshold is
    l^(1/delta) * (C*M_inf/eps + 1)^(1/delta).
    """
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    return l ** (1.0 / delta) * (C * M_inf / eps + 1.0) ** (1.0 / delta)


def kadapt_policies(
    profile: GuaranteeProfile,
    n: int,
    a: float,
    mode: str = "additive",
    first_stage_nonneg: bool = True,
    conservative: bool = False,
) -> int:
    """Second-stage policy count sufficient for guarantee `a` on the two-stage problem.

    additive mode: k = n - floor(a*n / (M(n)+a)).  multiplicative mode:
    k = ceil(n * Mt(n) / (Mt(n)+a)), valid only for nonnegative first-stage
    costs and m_inf > 0.
    """
    if mode == "additive":
        return n - max_l_additive(profile, n, a, conservative)
    if mode == "multiplicative":
        if not first_stage_nonneg:
            raise ValueError("multiplicative mode requires nonnegative first-stage costs")
        q = min_q_multiplicative(profile, n, a)
        return int(math.ceil(q * n))
    raise ValueError(f"unknown mode {mode!r}")


def certificate(profile: GuaranteeProfile, n: int, k: int) -> GuaranteeCertificate:
    """Certificate for an approximation run that kept the k heaviest columns."""
    drop = max(0, n - k)
    add = big_m(profile, n) * drop / (k + 1)
    add = max(0.0, add)
    mult = None
    lo, _ = profile.supports(n)
    if profile.m_inf > 0.0 and lo >= 1.0:
        mult = 1.0 + m_tilde(profile, n) * drop / (k + 1)
    return GuaranteeCertificate(additive=add, multiplicative=mult, valid_k_range=(1, n))


_CATALOG = {
    "spanning_tree_complete": lambda p: (SupportFunc.sqrt(), SupportFunc.sqrt()),
    "matching_complete": lambda p: (SupportFunc.sqrt(), SupportFunc.sqrt()),
    "cardinality": lambda p: (SupportFunc.const(p), SupportFunc.const(p)),
    "tsp": lambda p: (SupportFunc.sqrt(), SupportFunc.sqrt()),
    "vrp": lambda p: (SupportFunc.sqrt(1.0), SupportFunc.sqrt(2.0)),
    "generic": lambda p: (SupportFunc.const(1), SupportFunc.power(1.0, 0.0)),
}


def profile_catalog(problem: str, p: Optional[int] = None):
    """Support-size bound pair (p_low, p_high) for a named problem class.

    cardinality requires the cardinality p; generic returns the always-valid
    (1, n) pair.
    """
    try:
        builder = _CATALOG[problem]
    except KeyError:
        raise ValueError(
            f"unknown problem class {problem!r}; choose from {sorted(_CATALOG)}"
        ) from None
    if problem == "cardinality":
        if p is None or p < 1:
            raise ValueError("cardinality class needs its cardinality p >= 1")
    return builder(p)


def round_fraction(value: float, digits: int = 2) -> str:
    """Half-up decimal rounding, widening to 3 digits when 2 would print 0 or 1."""
    q = Decimal(1).scaleb(-digits)
    d = Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP)
    if digits == 2 and (d == 1 or d == 0) and 0.0 < value < 1.0:
        return round_fraction(value, 3)
    return str(d.normalize() if d != d.to_integral() else d)


def recoverable_table(n: int = 1000, M: float = 400.0, mt: float = 2.0):
    """Policy-count table for the recoverable-robustness setting.

    Rows: guarantee a in {1, log n, sqrt n}; columns: additive and
    multiplicative policy counts as integers plus their displayed fraction of
    n.  Natural logarithms throughout (base 2 or 10 does not reproduce the
    known reference values).
    """
    profile_add = GuaranteeProfile(M + 1.0, 1.0, SupportFunc.const(1), SupportFunc.const(1))
    profile_mult = GuaranteeProfile.from_ratio(mt)
    rows = []
    for label, a in (("1", 1.0), ("log(n)", math.log(n)), ("sqrt(n)", math.sqrt(n))):
        k_add = kadapt_policies(profile_add, n, a, "additive")
        k_mult = kadapt_policies(profile_mult, n, a, "multiplicative", True)
        rows.append(
            {
                "a": label,
                "k_additive": k_add,
                "k_multiplicative": k_mult,
                "additive_fraction": round_fraction(k_add / n),
                "multiplicative_fraction": round_fraction(k_mult / n),
            }
        )
    return rows


def facility_fractions(n: int = 100000, mt: float = 2.0):
    """Worked policy fractions q = Mt/(Mt+a) for a in {1, log n, sqrt n}."""
    profile = GuaranteeProfile.from_ratio(mt)
    out = []
    for label, a in (("1", 1.0), ("log(n)", math.log(n)), ("sqrt(n)", math.sqrt(n))):
        q = min_q_multiplicative(profile, n, a)
        out.append({"a": label, "q": q, "k": kadapt_policies(profile, n, a, "multiplicative", True)})
    return out
