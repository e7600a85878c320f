import math

import numpy as np
import pytest

from minmaxmin.guarantees import (
    GuaranteeCertificate,
    GuaranteeProfile,
    SupportFunc,
    additive_bound,
    big_m,
    facility_fractions,
    kadapt_policies,
    m_tilde,
    max_l_additive,
    min_q_multiplicative,
    multiplicative_bound,
    n_threshold,
    profile_catalog,
    recoverable_table,
    round_fraction,
)


def _const_profile(M, m, p_lo, p_hi):
    return GuaranteeProfile(M, m, SupportFunc.const(p_lo), SupportFunc.const(p_hi))


class TestBigM:
    def test_direct_formula(self):
        assert big_m(_const_profile(41, 40, 10, 10), 100) == pytest.approx(10.0)

    def test_recoverable_band(self):
        # 2% band around means in [800, 1000]: M = 0.04 * 1000 * 10 = 400
        prof = _const_profile(1020.0, 980.0, 10, 10)
        assert big_m(prof, 1000) == pytest.approx(0.04 * 1000.0 * 10)

    def test_degenerate_zero(self):
        assert big_m(_const_profile(7, 7, 3, 3), 50) == pytest.approx(0.0)

    def test_conservative_flag(self):
        prof = _const_profile(10, 2, 1, 4)
        assert big_m(prof, 10) == pytest.approx(38.0)
        assert big_m(prof, 10, conservative=True) == pytest.approx(40.0)


class TestMTilde:
    def test_facility_ratio(self):
        assert m_tilde(_const_profile(1020, 784, 10, 10), 1000) == pytest.approx(1020 / 784)
        assert m_tilde(_const_profile(1020, 784, 10, 10), 1000) <= 2.0

    def test_unit(self):
        assert m_tilde(_const_profile(5, 5, 2, 2), 10) == pytest.approx(1.0)

    def test_support_ratio(self):
        prof = GuaranteeProfile(2.0, 1.0, SupportFunc.const(1), SupportFunc.power(1.0, 0.0))
        for n in (4, 16, 64):
            assert m_tilde(prof, n) == pytest.approx(2.0 * n)


class TestAdditiveBound:
    def test_direct(self):
        prof = _const_profile(11, 1, 1, 1)  # M = 10
        assert additive_bound(prof, 1000, 999, 1000) == pytest.approx(0.01)

    def test_vanishes_for_large_k(self):
        prof = _const_profile(11, 1, 1, 1)
        vals = [additive_bound(prof, 10**e, 10**e - 1, 10**e) for e in range(2, 7)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-4

    def test_requires_s_below_k(self):
        prof = _const_profile(2, 1, 1, 1)
        with pytest.raises(ValueError):
            additive_bound(prof, 10, 5, 5)


class TestMultiplicativeBound:
    def test_two_thirds_keeps_factor_two(self):
        prof = GuaranteeProfile.from_ratio(2.0)
        n = 900
        s = 2 * n // 3
        assert multiplicative_bound(prof, n, s, n) <= 2.0 + 1e-12

    def test_error_when_s_not_below_k(self):
        with pytest.raises(ValueError):
            multiplicative_bound(GuaranteeProfile.from_ratio(2.0), 10, 10, 10)

    def test_direct(self):
        assert multiplicative_bound(GuaranteeProfile.from_ratio(1.0), 10, 1, 2) == pytest.approx(1.5)


class TestRanges:
    def test_max_l_simple(self):
        prof = _const_profile(10, 1, 1, 1)  # M = 9
        assert max_l_additive(prof, 100, 1.0) == 10

    def test_zero_guarantee(self):
        assert max_l_additive(_const_profile(10, 1, 1, 1), 100, 0.0) == 0

    def test_recoverable_l(self):
        prof = _const_profile(401, 1, 1, 1)  # M = 400
        l = max_l_additive(prof, 1000, 1.0)
        assert l == 2  # k0 = 0.998 n
        assert additive_bound(prof, 1000, 1000 - l, 1000) == pytest.approx(800 / 999)
        assert additive_bound(prof, 1000, 1000 - l, 1000) <= 1.0

    def test_min_q_examples(self):
        prof = GuaranteeProfile.from_ratio(2.0)
        assert min_q_multiplicative(prof, 1000, 1.0) == pytest.approx(2 / 3)
        q_log = min_q_multiplicative(prof, 1000, math.log(1000))
        assert q_log == pytest.approx(0.2245, abs=5e-4)
        assert math.ceil(q_log * 100) / 100 == pytest.approx(0.23)
        q_sqrt = min_q_multiplicative(prof, 1000, math.sqrt(1000))
        assert q_sqrt == pytest.approx(0.0595, abs=5e-4)
        assert math.ceil(q_sqrt * 100) / 100 == pytest.approx(0.06)

    def test_plugging_l_back_respects_guarantee(self):
        rng = np.random.RandomState(71)
        for _ in range(200):
            M_inf = rng.uniform(1.0, 50.0)
            m_inf = rng.uniform(0.1, M_inf)
            hi = rng.randint(1, 20)
            lo = rng.randint(1, hi + 1)
            prof = _const_profile(M_inf, m_inf, lo, hi)
            n = int(rng.randint(max(hi, 2), 10**4))
            a = float(rng.uniform(0.0, 30.0))
            l = max_l_additive(prof, n, a)
            assert 0 <= l <= n - 1
            if l >= 1:
                assert additive_bound(prof, n, n - l, n) <= a + 1e-9

    def test_plugging_q_back_respects_guarantee(self):
        rng = np.random.RandomState(73)
        for _ in range(200):
            prof = GuaranteeProfile.from_ratio(rng.uniform(1.0, 20.0))
            n = int(rng.randint(10, 10**4))
            a = float(rng.uniform(0.01, 30.0))
            q = min_q_multiplicative(prof, n, a)
            k = int(math.ceil(q * n))
            if k < n:
                assert multiplicative_bound(prof, n, k, n) <= 1 + a + 1e-9


class TestNThreshold:
    def test_direct_values(self):
        assert n_threshold(1, 1.0, 1.0, 1.0, 1.0) == pytest.approx(2.0)
        assert n_threshold(2, 0.5, 1.0, 1.0, 1.0) == pytest.approx(16.0)

    def test_above_threshold_guarantee_holds(self):
        for l, delta, C, M_inf, eps in ((1, 0.5, 1.0, 2.0, 0.5), (3, 0.75, 2.0, 1.5, 1.0)):
            t = n_threshold(l, delta, C, M_inf, eps)
            prof = GuaranteeProfile(M_inf, M_inf, SupportFunc.const(1), SupportFunc.power(C, delta))
            for n in {int(math.ceil(t)) + off for off in (0, 1, 10, 100)}:
                bound = additive_bound(prof, n, n - l, n, conservative=True)
                assert bound <= eps + 1e-9

    def test_validation(self):
        with pytest.raises(ValueError):
            n_threshold(1, 0.0, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            n_threshold(1, 0.5, 1.0, 1.0, 0.0)


class TestKadaptPolicies:
    def test_facility_location_log_guarantee(self):
        n = 100000
        prof = GuaranteeProfile.from_ratio(2.0)
        k = kadapt_policies(prof, n, math.log(n), "multiplicative", True)
        assert k <= 0.15 * n

    def test_recoverable_sqrt_additive(self):
        prof = _const_profile(401.0, 1.0, 1, 1)  # M = 400
        k = kadapt_policies(prof, 1000, math.sqrt(1000), "additive")
        assert k == 927
        assert round_fraction(k / 1000) == "0.93"

    def test_monotone_in_guarantee(self):
        prof = GuaranteeProfile.from_ratio(2.0)
        ks = [kadapt_policies(prof, 1000, a, "multiplicative", True) for a in (0.5, 1, 2, 5, 10, 100)]
        assert all(b <= a for a, b in zip(ks, ks[1:]))

    def test_multiplicative_needs_nonneg_first_stage(self):
        with pytest.raises(ValueError):
            kadapt_policies(GuaranteeProfile.from_ratio(2.0), 100, 1.0, "multiplicative", False)


class TestCatalog:
    def test_cardinality(self):
        lo, hi = profile_catalog("cardinality", 10)
        assert lo(50) == 10 and hi(50) == 10

    def test_tsp_sqrt_form(self):
        lo, hi = profile_catalog("tsp")
        assert lo(64) == pytest.approx(8.0)
        assert hi(64) == pytest.approx(8.0)

    def test_generic(self):
        lo, hi = profile_catalog("generic")
        assert lo(1000) == 1 and hi(1000) == 1000

    def test_vrp_band(self):
        lo, hi = profile_catalog("vrp")
        assert lo(100) == pytest.approx(10.0)
        assert hi(100) == pytest.approx(20.0)

    def test_unknown(self):
        with pytest.raises(ValueError):
            profile_catalog("steiner")
        with pytest.raises(ValueError):
            profile_catalog("cardinality")


class TestWorkedTables:
    def test_recoverable_table_cells(self):
        rows = recoverable_table(n=1000, M=400.0, mt=2.0)
        assert [r["k_additive"] for r in rows] == [998, 984, 927]
        assert [r["k_multiplicative"] for r in rows] == [667, 225, 60]
        assert [r["additive_fraction"] for r in rows] == ["0.998", "0.98", "0.93"]
        assert [r["multiplicative_fraction"] for r in rows] == ["0.67", "0.23", "0.06"]

    def test_facility_fractions(self):
        rows = facility_fractions(n=100000, mt=2.0)
        assert rows[0]["q"] == pytest.approx(2 / 3)
        assert rows[1]["q"] <= 0.15
        assert rows[2]["q"] <= 0.007


class TestCertificateType:
    def test_invariants(self):
        with pytest.raises(ValueError):
            GuaranteeCertificate(-1.0, None, (1, 10))
        with pytest.raises(ValueError):
            GuaranteeCertificate(0.0, 0.5, (1, 10))

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            GuaranteeProfile(1.0, 2.0, SupportFunc.const(1), SupportFunc.const(1))
        prof = GuaranteeProfile(2.0, 1.0, SupportFunc.const(5), SupportFunc.const(3))
        with pytest.raises(ValueError):
            prof.supports(10)
