from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sievelab.arith import SieveError, g_from_values, make_g, mean_value, sieve_f
from sievelab.integrals import (
    quadrature_oracle,
    selberg_integral,
    symmetry_integral,
    window_sums,
)

from conftest import brute_selberg, brute_symmetry, brute_values, preset_g


def table(g, N, h):
    return sieve_f(g, 1, 2 * N + 4 * h)


class TestHandCases:
    def test_selberg_delta1_is_zero(self):
        for N, h in [(10, 1), (50, 7), (300, 20)]:
            f = table(make_g("delta1", 3), N, h)
            assert selberg_integral(f, N, h, 2 * h).value == 0

    def test_selberg_ones_q2(self):
        f = table(make_g("ones", 2), 4, 1)
        assert selberg_integral(f, 4, 1, 3).value == 0

    def test_selberg_ones_q3(self):
        f = table(make_g("ones", 3), 4, 1)
        # windows f(m) + f(m+1) for m = 4..7 are 3, 4, 4, 3
        hand = 2 * (3 - Fraction(11, 3)) ** 2 + 2 * (4 - Fraction(11, 3)) ** 2
        assert hand == Fraction(10, 9)
        assert selberg_integral(f, 4, 1, Fraction(11, 3)).value == Fraction(10, 9)

    def test_symmetry_delta1(self):
        f = table(make_g("delta1", 1), 100, 10)
        assert symmetry_integral(f, 100, 10).value == 0

    def test_symmetry_ones_q2(self):
        f = table(make_g("ones", 2), 4, 1)
        assert symmetry_integral(f, 4, 1).value == 4

    def test_symmetry_ones_q3(self):
        f = table(make_g("ones", 3), 4, 1)
        assert (1 - 2) ** 2 + (3 - 1) ** 2 + (1 - 3) ** 2 + (2 - 1) ** 2 == 10
        assert symmetry_integral(f, 4, 1).value == 10

    def test_default_mean(self):
        g = make_g("ones", 3)
        f = table(g, 4, 1)
        res = selberg_integral(f, 4, 1)
        assert res.mean_used == mean_value(g, 1) == Fraction(11, 3)
        assert res.value == Fraction(10, 9)


class TestAgainstBruteForce:
    @pytest.mark.parametrize("N, h", [(20, 2), (57, 5), (120, 9)])
    def test_both_integrals(self, preset, N, h):
        g = preset_g(preset, 12)
        f = table(g, N, h)
        fv = brute_values(g, 2 * N + 2 * h)
        M = mean_value(g, h)
        assert selberg_integral(f, N, h, M).value == brute_selberg(fv, N, h, M)
        assert symmetry_integral(f, N, h).value == brute_symmetry(fv, N, h)

    def test_rational_seed(self):
        g = g_from_values([Fraction(1, 2), Fraction(-2, 3), 0, Fraction(1, 7)])
        N, h = 40, 3
        f = table(g, N, h)
        fv = brute_values(g, 2 * N + 2 * h)
        M = mean_value(g, h)
        assert selberg_integral(f, N, h).value == brute_selberg(fv, N, h, M)
        assert symmetry_integral(f, N, h).value == brute_symmetry(fv, N, h)

    def test_huge_values_use_exact_path(self):
        g = g_from_values([2**40, -(2**40) + 1, 5])
        N, h = 30, 2
        f = table(g, N, h)
        fv = brute_values(g, 2 * N + 2 * h)
        assert symmetry_integral(f, N, h).value == brute_symmetry(fv, N, h)
        M = mean_value(g, h)
        assert selberg_integral(f, N, h).value == brute_selberg(fv, N, h, M)


class TestQuadratureOracle:
    def test_hand_case(self):
        f = table(make_g("ones", 3), 4, 1)
        assert quadrature_oracle(f, 4, 1, "selberg", Fraction(11, 3), 8) == Fraction(10, 9)

    def test_delta1_symmetry(self):
        f = table(make_g("delta1", 1), 20, 3)
        assert quadrature_oracle(f, 20, 3, "symmetry", None, 4) == 0

    def test_moebius_cross_validation(self):
        f = table(make_g("moebius", 5), 50, 4)
        assert quadrature_oracle(f, 50, 4, "symmetry", None, 8) == symmetry_integral(f, 50, 4).value

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_any_density(self, preset, k):
        g = preset_g(preset, 9)
        N, h = 60, 4
        f = table(g, N, h)
        M = mean_value(g, h)
        assert quadrature_oracle(f, N, h, "selberg", M, k) == selberg_integral(f, N, h, M).value
        assert quadrature_oracle(f, N, h, "symmetry", None, k) == symmetry_integral(f, N, h).value

    def test_rejects_bad_args(self):
        f = table(make_g("ones", 2), 10, 1)
        with pytest.raises(ValueError):
            quadrature_oracle(f, 10, 1, "other")
        with pytest.raises(ValueError):
            quadrature_oracle(f, 10, 1, "symmetry", samples_per_unit=0)


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(
        vals=st.lists(st.integers(-3, 3), min_size=1, max_size=15),
        N=st.integers(10, 120),
        h=st.integers(1, 6),
        shift=st.fractions(min_value=-5, max_value=5, max_denominator=12),
    )
    def test_quadratic_shift_identity(self, vals, N, h, shift):
        g = g_from_values(vals)
        f = table(g, N, h)
        M = mean_value(g, h)
        M2 = M + shift
        two, _ = window_sums(f, N, h)
        resid_sum = sum(Fraction(int(w), f.denominator) - M for w in two)
        J = selberg_integral(f, N, h, M).value
        J2 = selberg_integral(f, N, h, M2).value
        assert J2 == J + N * shift**2 - 2 * shift * resid_sum

    def test_unit_shift(self):
        g = make_g("ones", 7)
        N, h = 200, 5
        f = table(g, N, h)
        M = mean_value(g, h)
        two, _ = window_sums(f, N, h)
        resid_sum = sum(int(w) - M for w in two)
        diff = selberg_integral(f, N, h, M + 1).value - selberg_integral(f, N, h, M).value
        assert diff == N - 2 * resid_sum

    def test_nonnegative(self, preset):
        g = preset_g(preset, 20)
        f = table(g, 300, 8)
        assert selberg_integral(f, 300, 8).value >= 0
        assert symmetry_integral(f, 300, 8).value >= 0

    @pytest.mark.parametrize("N, h", [(1000, 10), (20_000, 50), (100_000, 100)])
    def test_float_mode_agrees(self, preset, N, h):
        g = preset_g(preset, 50)
        f = table(g, N, h)
        for fn in (selberg_integral, symmetry_integral):
            exact = fn(f, N, h).value
            approx = fn(f, N, h, mode="float").value
            assert approx == pytest.approx(float(exact), rel=1e-6, abs=1e-6)

    def test_large_support_flag(self):
        g = make_g("ones", 30)
        f = table(g, 20, 2)
        assert selberg_integral(f, 20, 2).large_support
        assert not selberg_integral(table(make_g("ones", 5), 20, 2), 20, 2).large_support

    def test_short_table(self):
        f = sieve_f(make_g("ones", 2), 1, 20)
        with pytest.raises(SieveError):
            symmetry_integral(f, 10, 2)
        with pytest.raises(SieveError):
            selberg_integral(sieve_f(make_g("ones", 2), 5, 40), 5, 2)
