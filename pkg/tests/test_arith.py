from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sievelab.arith import (
    ScaleParams,
    SieveError,
    dyadic_sum,
    dyadic_sum_by_divisors,
    f_bruteforce,
    g_from_values,
    make_g,
    mean_value,
    sieve_f,
    sieve_partitioned,
)

from conftest import brute_f, preset_g


class TestMakeG:
    def test_delta1(self):
        assert make_g("delta1", 5).values == (1, 0, 0, 0, 0)

    def test_ones(self):
        assert make_g("ones", 3).values == (1, 1, 1)

    def test_moebius_first_values(self):
        expected = (1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0)
        assert make_g("moebius", 12).values == expected

    def test_random_is_reproducible(self):
        a = make_g("random_bounded", 4, seed=7, bound=2)
        b = make_g("random_bounded", 4, seed=7, bound=2)
        assert a == b
        assert len(a.values) == 4
        assert all(-2 <= v <= 2 and v.denominator == 1 for v in a.values)

    def test_random_seed_changes_values(self):
        a = make_g("random_bounded", 64, seed=1, bound=3)
        b = make_g("random_bounded", 64, seed=2, bound=3)
        assert a.values != b.values

    @pytest.mark.parametrize(
        "args, kwargs",
        [
            (("nope", 3), {}),
            (("ones", 0), {}),
            (("random_bounded", 3), {}),
            (("ones", 3), {"seed": 1}),
        ],
    )
    def test_errors(self, args, kwargs):
        with pytest.raises(SieveError):
            make_g(*args, **kwargs)

    def test_declared_bound_enforced(self):
        with pytest.raises(SieveError):
            g_from_values([1, 5], bound=2)

    def test_values_beyond_support_are_zero(self):
        g = make_g("ones", 3)
        assert g(4) == 0 and g(100) == 0 and g(0) == 0


class TestSieve:
    def test_ones_q3_at_12(self):
        f = sieve_f(make_g("ones", 3), 12, 12)
        assert f[12] == 3

    def test_delta1_is_constant_one(self):
        f = sieve_f(make_g("delta1", 4), 1, 10)
        assert f.exact_values() == [1] * 10

    def test_ones_q3_small_range(self):
        f = sieve_f(make_g("ones", 3), 7, 9)
        assert [f[7], f[8], f[9]] == [1, 2, 2]

    @pytest.mark.parametrize("lo, hi", [(0, 5), (5, 4), (-3, 2)])
    def test_bad_range(self, lo, hi):
        with pytest.raises(SieveError):
            sieve_f(make_g("ones", 3), lo, hi)

    def test_matches_trial_division(self, preset):
        g = preset_g(preset, 30)
        f = sieve_f(g, 1, 400)
        assert f.exact_values() == [brute_f(g, n) for n in range(1, 401)]

    def test_sup_norm(self):
        f = sieve_f(make_g("ones", 6), 1, 60)
        assert f.sup_norm == 6  # n = 60 is divisible by every d <= 6
        assert f.sup(1, 5) == 3  # f(4) = #{1,2,4}

    def test_rational_seed(self):
        g = g_from_values([Fraction(1, 2), Fraction(-1, 3), Fraction(2, 5)])
        f = sieve_f(g, 1, 60)
        assert f.denominator == 30
        assert f.exact_values() == [f_bruteforce(g, n) for n in range(1, 61)]

    def test_huge_seed_values_stay_exact(self):
        big = 2**70
        g = g_from_values([big, -big, 3])
        f = sieve_f(g, 1, 12)
        assert f[6] == big - big + 3
        assert f[5] == big

    @settings(max_examples=40, deadline=None)
    @given(
        vals=st.lists(st.integers(-5, 5), min_size=1, max_size=25),
        lo=st.integers(1, 300),
        span=st.integers(0, 200),
    )
    def test_convolution_property(self, vals, lo, span):
        g = g_from_values(vals)
        f = sieve_f(g, lo, lo + span)
        for n in range(lo, lo + span + 1, max(1, span // 20)):
            assert f[n] == f_bruteforce(g, n)

    @pytest.mark.parametrize("parts", [1, 2, 3, 7, 16])
    def test_partition_independence(self, parts):
        g = make_g("moebius", 40)
        whole = sieve_f(g, 5, 1000)
        split = sieve_partitioned(g, 5, 1000, parts)
        assert np.array_equal(whole.scaled, split.scaled)


class TestMeanValue:
    def test_delta1(self):
        assert mean_value(make_g("delta1", 7), 5) == 10

    def test_ones_q3(self):
        assert mean_value(make_g("ones", 3), 2) == Fraction(22, 3)

    def test_ones_q2(self):
        assert mean_value(make_g("ones", 2), 1) == 3

    def test_bad_h(self):
        with pytest.raises(SieveError):
            mean_value(make_g("ones", 2), 0)

    @settings(max_examples=30, deadline=None)
    @given(vals=st.lists(st.integers(-3, 3), min_size=1, max_size=20), h=st.integers(1, 50))
    def test_linear_in_h(self, vals, h):
        g = g_from_values(vals)
        assert mean_value(g, 2 * h) == 2 * mean_value(g, h)


class TestDyadicSum:
    def test_delta1(self):
        f = sieve_f(make_g("delta1", 1), 1, 20)
        assert dyadic_sum(f, 10) == 10

    def test_ones_q2_n9(self):
        g = make_g("ones", 2)
        f = sieve_f(g, 1, 18)
        brute = sum(brute_f(g, n) for n in range(10, 19))
        assert brute == 14
        assert dyadic_sum(f, 9) == dyadic_sum_by_divisors(g, 9) == brute

    def test_ones_q3_n10(self):
        g = make_g("ones", 3)
        f = sieve_f(g, 1, 20)
        brute = sum(brute_f(g, n) for n in range(11, 21))
        assert dyadic_sum(f, 10) == dyadic_sum_by_divisors(g, 10) == brute

    def test_table_too_short(self):
        f = sieve_f(make_g("ones", 2), 1, 15)
        with pytest.raises(SieveError):
            dyadic_sum(f, 9)

    @pytest.mark.parametrize("N", [1, 7, 100, 999, 4096, 10_000])
    def test_identity_all_presets(self, preset, N):
        g = preset_g(preset, 50)
        f = sieve_f(g, 1, 2 * N)
        assert dyadic_sum(f, N) == dyadic_sum_by_divisors(g, N)


class TestScaleParams:
    def test_rounding(self):
        p = ScaleParams.from_exponents(2**14, 0.5, 0.6)
        assert (p.h, p.Q) == (128, 338)
        assert p.theta == pytest.approx(0.5)

    @pytest.mark.parametrize("N, h, Q", [(100, 25, 5), (100, 30, 5), (100, 5, 201), (10, 0, 1)])
    def test_rejects(self, N, h, Q):
        with pytest.raises(SieveError):
            ScaleParams(N, h, Q)

    @pytest.mark.parametrize("theta, lam", [(1.0, 0.5), (0.5, 1.0), (0.0, 0.5), (0.5, -0.1)])
    def test_rejects_exponents(self, theta, lam):
        with pytest.raises(SieveError):
            ScaleParams.from_exponents(10_000, theta, lam)
