"""Tests for exact/Monte Carlo skew sign-matrix determinant statistics."""

import math

import numpy as np
import pytest

from momenttail.numutil import log_factorial
from momenttail.skewdet import (
    DetStats,
    SkewSignMatrix,
    det_exact,
    det_existence_bound,
    enumerate_stats,
    mc_stats,
    pfaffian_exact,
    search_high_det,
    second_moment_det_bound,
    szekeres_s1_asym,
    szekeres_s2_asym,
)

from oracles import det_cofactor


def all_plus(n, convention="zero"):
    m = n * (n - 1) // 2
    return SkewSignMatrix(n, (1,) * m, convention)


class TestMatrixType:
    def test_round_trip_bits(self):
        m = SkewSignMatrix.from_bits(4, 0b101011)
        assert m.upper == (1, 1, -1, 1, -1, 1)
        rows = m.to_rows()
        for i in range(4):
            assert rows[i][i] == 0
            for j in range(4):
                assert rows[i][j] == -rows[j][i]

    def test_unit_diagonal(self):
        rows = all_plus(3, "unit").to_rows()
        assert [rows[i][i] for i in range(3)] == [1, 1, 1]

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            SkewSignMatrix(4, (1, 1, 1))

    def test_rejects_non_sign(self):
        with pytest.raises(ValueError):
            SkewSignMatrix(2, (2,))


class TestDetExact:
    def test_n2(self):
        assert det_exact(all_plus(2)) == 1

    def test_odd_skew_vanishes(self):
        for bits in range(8):
            assert det_exact(SkewSignMatrix.from_bits(3, bits)) == 0

    def test_n4_all_plus_against_cofactor(self):
        m = all_plus(4)
        assert det_exact(m) == det_cofactor(m.to_rows())

    def test_random_matrices_against_cofactor(self):
        rng = np.random.Generator(np.random.Philox(key=7))
        for n in (4, 5, 6):
            for conv in ("zero", "unit"):
                for _ in range(10):
                    bits = int(rng.integers(0, 1 << (n * (n - 1) // 2)))
                    m = SkewSignMatrix.from_bits(n, bits, conv)
                    assert det_exact(m) == det_cofactor(m.to_rows())

    def test_pfaffian_squared_equals_det(self):
        rng = np.random.Generator(np.random.Philox(key=8))
        for n in (2, 4, 6, 8, 10):
            for _ in range(5):
                bits = int(rng.integers(0, 1 << min(n * (n - 1) // 2, 63)))
                m = SkewSignMatrix.from_bits(n, bits)
                assert det_exact(m) == pfaffian_exact(m) ** 2

    def test_pfaffian_rejects_unit_diagonal(self):
        with pytest.raises(ValueError):
            pfaffian_exact(all_plus(4, "unit"))

    def test_relabeling_invariance(self):
        # conjugating by a permutation matrix preserves |det|
        rng = np.random.Generator(np.random.Philox(key=9))
        for _ in range(20):
            n = 6
            bits = int(rng.integers(0, 1 << 15))
            m = SkewSignMatrix.from_bits(n, bits)
            rows = m.to_rows()
            perm = rng.permutation(n)
            permuted_upper = tuple(
                rows[perm[i]][perm[j]] for i in range(n) for j in range(i + 1, n)
            )
            m2 = SkewSignMatrix(n, permuted_upper)
            assert abs(det_exact(m2)) == abs(det_exact(m))


class TestEnumeration:
    def test_n2(self):
        st = enumerate_stats(2)
        assert st.count == 2
        assert st.s1 == st.s2 == 1.0
        assert st.max_abs_det == 1

    def test_n3_zero_diagonal(self):
        st = enumerate_stats(3)
        assert st.s1 == st.s2 == 0.0
        assert st.max_abs_det == 0

    def test_n4_spot_checked_by_cofactor(self):
        st = enumerate_stats(4)
        assert st.count == 64
        # recompute three arbitrary members independently
        for bits in (0, 21, 63):
            m = SkewSignMatrix.from_bits(4, bits)
            assert det_exact(m) == det_cofactor(m.to_rows())
        # dets are Pf^2 with Pf = x - y + z over independent signs:
        # |det| = 9 on a quarter of the space, 1 elsewhere
        assert st.sum_absdet == 16 * 9 + 48 * 1
        assert st.sum_det2 == 16 * 81 + 48 * 1
        assert st.max_abs_det == 9
        assert st.s1 == pytest.approx(3.0)
        assert st.s2 == pytest.approx(math.sqrt(21.0))

    def test_guard_redirects_to_mc(self):
        with pytest.raises(ValueError, match="mc_stats"):
            enumerate_stats(9)

    def test_power_mean_holds(self):
        for n in (2, 4, 5, 6):
            st = enumerate_stats(n, "unit")
            assert st.s2 >= st.s1 * (1 - 1e-12)


class TestMonteCarlo:
    def test_n2_is_constant(self):
        st = mc_stats(2, 200, seed=1)
        assert st.s1 == 1.0
        assert st.s2 == 1.0
        assert st.stderr_s1 == 0.0

    def test_matches_enumeration_within_4_sigma(self):
        exact = enumerate_stats(6)
        mc = mc_stats(6, 20_000, seed=42)
        assert abs(mc.s1 - exact.s1) <= 4 * mc.stderr_s1
        assert abs(mc.s2 - exact.s2) <= 4 * mc.stderr_s2

    def test_disjoint_seeds_agree(self):
        a = mc_stats(10, 5_000, seed=101)
        b = mc_stats(10, 5_000, seed=202)
        assert abs(a.s1 - b.s1) <= 4 * math.hypot(a.stderr_s1, b.stderr_s1)
        assert abs(a.s2 - b.s2) <= 4 * math.hypot(a.stderr_s2, b.stderr_s2)

    def test_deterministic_across_threads(self):
        one = mc_stats(6, 9_000, seed=5, threads=1)
        four = mc_stats(6, 9_000, seed=5, threads=4)
        assert one == four

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            mc_stats(4, 99)


class TestAsymptotics:
    def test_s1_log_self_consistency(self):
        for n in (6, 20, 100):
            expected = (
                -0.25 * math.log(8 * math.pi * math.e * n)
                + math.sqrt(n)
                + 0.5 * log_factorial(n)
            )
            assert szekeres_s1_asym(n).log == pytest.approx(expected, rel=1e-12)

    def test_s2_log_self_consistency(self):
        for n in (6, 20, 100):
            expected = (
                -0.5 * math.log(32 * math.pi * math.e**3)
                + 2 * math.sqrt(n)
                + 0.5 * log_factorial(n)
            )
            assert szekeres_s2_asym(n).log == pytest.approx(expected, rel=1e-12)

    def test_finite_log_at_n100(self):
        assert math.isfinite(szekeres_s1_asym(100).log)
        assert math.isfinite(szekeres_s2_asym(100).log)

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            szekeres_s1_asym(5)

    def test_ratio_to_enumeration_is_recorded_not_asserted(self):
        # asymptotic-only relation: just confirm it is a sane positive ratio
        exact = enumerate_stats(6)
        ratio = exact.s1 / szekeres_s1_asym(6).value
        assert 0 < ratio < 10


class TestExistenceBound:
    def test_n4_direct_arithmetic(self):
        expected = (4 / (64 * math.pi * math.e**5)) ** 0.25 * math.e**2 * math.sqrt(24)
        assert det_existence_bound(4).value == pytest.approx(expected, rel=1e-12)

    def test_monotone_in_n(self):
        logs = [det_existence_bound(n).log for n in range(2, 40)]
        assert all(a < b for a, b in zip(logs, logs[1:]))

    def test_log_vs_direct_evaluation(self):
        for n in range(2, 31):
            direct = (
                (n / (64 * math.pi * math.e**5)) ** 0.25
                * math.exp(math.sqrt(n))
                * math.sqrt(math.factorial(n))
            )
            assert det_existence_bound(n).value == pytest.approx(direct, rel=1e-12)


class TestSecondMomentBound:
    def test_n2(self):
        st = enumerate_stats(2)
        assert second_moment_det_bound(st) == pytest.approx(1.0)
        assert st.max_abs_det >= 1

    @pytest.mark.parametrize("n", [4, 6])
    def test_enumerated_bound_met(self, n):
        st = enumerate_stats(n)
        bound = second_moment_det_bound(st)
        assert st.max_abs_det >= bound * (1 - 1e-6)
        # exact rational form: max * sum|det| >= sum det^2
        assert st.max_abs_det * st.sum_absdet >= st.sum_det2

    def test_degenerate_ensemble_rejected(self):
        st = enumerate_stats(3)
        with pytest.raises(ValueError):
            second_moment_det_bound(st)


class TestSearch:
    def test_n2_immediate(self):
        res = search_high_det(2, budget=1, seed=0)
        assert res.abs_det == 1

    def test_n4_reaches_enumerated_max(self):
        exact = enumerate_stats(4)
        res = search_high_det(4, budget=200, seed=3)
        assert res.abs_det == exact.max_abs_det

    def test_budget_monotonicity(self):
        bests = [search_high_det(6, budget=b, seed=11).abs_det for b in (5, 40, 200, 800)]
        assert all(x <= y for x, y in zip(bests, bests[1:]))

    def test_deterministic_for_seed(self):
        a = search_high_det(8, budget=300, seed=21)
        b = search_high_det(8, budget=300, seed=21)
        assert a == b

    def test_ratios_populated(self):
        res = search_high_det(6, budget=300, seed=2)
        assert res.ratio_to_existence_bound > 0
        assert res.ratio_to_s1_asym is not None and res.ratio_to_s1_asym > 0


class TestStatsType:
    def test_power_mean_enforced(self):
        with pytest.raises(ValueError):
            DetStats(
                n=4, mode="exact", convention="zero", count=4,
                s1=2.0, s2=1.0, sum_absdet=8, sum_det2=4, max_abs_det=3,
            )

    def test_json_uses_decimal_strings(self):
        st = enumerate_stats(4)
        payload = st.to_json_dict()
        assert payload["sum_det2"] == str(st.sum_det2)
        assert isinstance(payload["max_abs_det"], str)
