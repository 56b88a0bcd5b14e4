import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sievelab import kernels as K
from sievelab.kernels import KernelSpec, kernel_value


def rel(a, b):
    return abs(a - b) / (1 + abs(b))


class TestPointwise:
    def test_W_examples(self):
        assert kernel_value(KernelSpec("W", 5), 0) == 10
        assert kernel_value(KernelSpec("W", 5), 7) == -3

    def test_S_outside_support(self):
        assert kernel_value(KernelSpec("S", 5), 12) == 0

    def test_W_full_shape_h3(self):
        lags, w = KernelSpec("W", 3).full()
        assert list(lags) == list(range(-6, 7))
        assert list(w) == [0, -1, -2, -3, 0, 3, 6, 3, 0, -3, -2, -1, 0]

    def test_W_matches_signed_overlap_integral(self):
        # W(a) = measure{s: |s|<=h, |s-a|<=h, sgn(s) = sgn(s-a)} - measure{... opposite signs}
        for h in range(1, 8):
            for a in range(-2 * h - 2, 2 * h + 3):
                lo, hi = max(-h, a - h), min(h, a + h)
                if lo >= hi:
                    expected = 0
                else:
                    pts = sorted({lo, hi, 0, a} & set(range(lo, hi + 1)) | {lo, hi})
                    expected = 0
                    for x0, x1 in zip(pts, pts[1:]):
                        mid = Fraction(x0 + x1, 2)
                        expected += (x1 - x0) * (1 if (mid > 0) == (mid > a) else -1)
                assert kernel_value(KernelSpec("W", h), a) == expected

    @pytest.mark.parametrize("family", ["W", "S"])
    def test_even_and_supported(self, family):
        for h in range(1, 30):
            k = KernelSpec(family, h)
            assert k(0) == 2 * h
            for a in range(0, 3 * h):
                assert k(a) == k(-a)
                if a > 2 * h:
                    assert k(a) == 0
            if family == "S":
                assert all(k(a) >= 0 for a in range(-3 * h, 3 * h))

    def test_sums(self):
        for h in range(1, 101):
            assert K.kernel_sum(KernelSpec("W", h)) == 0
            assert K.kernel_sum(KernelSpec("S", h)) == 4 * h * h

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            KernelSpec("X", 2)
        with pytest.raises(ValueError):
            KernelSpec("W", 0)


class TestDistToInt:
    @pytest.mark.parametrize("r, d", [(1.5, 0.5), (3.0, 0.0), (-0.25, 0.25), (2.9, 0.1)])
    def test_values(self, r, d):
        assert K.dist_to_int(r) == pytest.approx(d)

    def test_fraction(self):
        assert K.dist_to_int(Fraction(7, 3)) == Fraction(1, 3)

    @given(st.floats(-1e6, 1e6, allow_nan=False))
    def test_range_and_symmetry(self, r):
        d = K.dist_to_int(r)
        assert 0 <= d <= 0.5
        assert d == pytest.approx(K.dist_to_int(-r), abs=1e-12)


class TestSumOverMultiples:
    def test_examples(self):
        assert K.sum_W_over_multiples(3, 2) == 2
        assert K.sum_W_over_multiples_direct(3, 2) == 2
        assert K.sum_W_over_multiples(3, 7) == 6
        assert K.sum_W_over_multiples(4, 1) == 0

    def test_exhaustive(self):
        for h in range(1, 51):
            for q in range(1, 51):
                assert K.sum_W_over_multiples(h, q) == K.sum_W_over_multiples_direct(h, q)


class TestFourierW:
    def test_examples(self):
        assert K.fourier_W(1, 0.5) == pytest.approx(4, abs=1e-12)
        assert K.fourier_W(1, 1 / 3) == pytest.approx(3, abs=1e-12)
        assert K.fourier_W(7, 0.0) == 0.0

    def test_hand_direct_sums(self):
        assert 2 + 2 * (-1) * math.cos(math.pi) == 4
        assert 2 + 2 * (-1) * math.cos(2 * math.pi / 3) == pytest.approx(3)

    @pytest.mark.parametrize("h", [1, 2, 5, 17, 50])
    def test_matches_direct(self, h):
        beta = np.random.default_rng(h).random(500)
        closed = K.fourier_W(h, beta)
        direct = K.fourier_W_direct(h, beta)
        assert np.all(np.abs(closed - direct) <= 1e-9 * (1 + np.abs(direct)))

    def test_near_integers_fall_back(self):
        for b in (1e-9, -3e-7, 2 + 1e-8, 5.0):
            assert rel(K.fourier_W(4, b), K.fourier_W_direct(4, b, compensated=True)) < 1e-9

    def test_shift_invariance(self):
        assert K.fourier_W(6, 0.3) == pytest.approx(K.fourier_W(6, 7.3), rel=1e-9)


class TestFourierWScaled:
    def test_example_h3_l2(self):
        assert K.fourier_W_scaled(3, 2, 0.5) == pytest.approx(1, abs=1e-12)
        assert K.fourier_W_scaled_direct(3, 2, 0.5) == pytest.approx(1, abs=1e-12)

    def test_ell_one_is_fourier_W(self):
        assert K.fourier_W_scaled(4, 1, 1 / 3) == pytest.approx(K.fourier_W(4, 1 / 3), rel=1e-12)

    def test_random_point(self):
        direct = K.fourier_W_scaled_direct(5, 3, 0.137, compensated=True)
        assert rel(K.fourier_W_scaled(5, 3, 0.137), direct) < 1e-9

    @pytest.mark.parametrize("h", [3, 4, 7, 10, 25])
    def test_both_cases(self, h):
        # ell straddles {h/ell} < 1/2 and >= 1/2
        cases = {2 * (h % ell) >= ell for ell in range(1, 2 * h + 1)}
        assert cases == {True, False}
        beta = np.random.default_rng(100 + h).random(200)
        for ell in range(1, 2 * h + 1):
            direct = K.fourier_W_scaled_direct(h, ell, beta)
            closed = K.fourier_W_scaled(h, ell, beta)
            first = K.fourier_W_scaled_first_form(h, ell, beta)
            assert np.all(np.abs(closed - direct) <= 1e-9 * (1 + np.abs(direct)))
            assert np.all(np.abs(first - direct) <= 1e-9 * (1 + np.abs(direct)))

    def test_integer_frequency(self):
        for h, ell in [(5, 2), (6, 4), (9, 9), (3, 6)]:
            assert K.fourier_W_scaled(h, ell, 0.0) == pytest.approx(
                K.fourier_W_scaled_direct(h, ell, 0.0), abs=1e-12
            )

    def test_bad_ell(self):
        with pytest.raises(ValueError):
            K.fourier_W_scaled(3, 0, 0.1)


class TestSpectrum:
    def test_grid_h3(self):
        assert K.spectrum_nonneg_check(3, 1, np.linspace(0, 1, 1000))

    def test_single_point(self):
        assert K.spectrum_nonneg_check(1, 1, [0.5])
        assert K.W_spectrum(1, 1, [0.5])[0] == pytest.approx(K.fourier_W(1, 0.5))

    def test_random_h6_l4(self):
        assert K.spectrum_nonneg_check(6, 4, np.random.default_rng(2024).random(500))

    def test_zero_frequency_is_multiple_sum(self):
        for h in range(1, 12):
            for ell in range(1, 2 * h + 1):
                assert K.W_spectrum(h, ell, [0.0])[0] == pytest.approx(
                    float(K.sum_W_over_multiples(h, ell)), abs=1e-9
                )


class TestFejer:
    def test_examples(self):
        assert K.fejer_S(1, 1, 2) == pytest.approx(0, abs=1e-12)
        assert K.fejer_S(2, 1, 3) == pytest.approx(1, abs=1e-12)
        assert K.fejer_S(3, 0, 5) == 36

    def test_hand_direct(self):
        direct = 4 + 6 * math.cos(2 * math.pi / 3) + 4 * math.cos(4 * math.pi / 3) + 2
        assert direct == pytest.approx(1)
        assert K.fejer_S_direct(2, 1, 3) == pytest.approx(1)

    def test_multiples_of_q(self):
        assert K.fejer_S(4, 10, 5) == 64
        assert K.fejer_S(4, -5, 5) == 64

    @settings(max_examples=200, deadline=None)
    @given(h=st.integers(1, 50), j=st.integers(-200, 200), q=st.integers(1, 80))
    def test_matches_direct_and_nonneg(self, h, j, q):
        val = K.fejer_S(h, j, q)
        assert val >= 0
        assert rel(val, K.fejer_S_direct(h, j, q, compensated=True)) <= 1e-9


class TestTrigSums:
    def test_examples(self):
        assert K.cos_sum(1, 0.25) == pytest.approx(0, abs=1e-12)
        assert K.cos_sum(2, 0.25) == pytest.approx(-1, abs=1e-12)
        assert K.sin_sum(1, 0.25) == pytest.approx(1, abs=1e-12)

    def test_integer_theta(self):
        assert K.cos_sum(7, 3.0) == 7
        assert K.sin_sum(7, 3.0) == 0

    @settings(max_examples=200, deadline=None)
    @given(X=st.integers(0, 120), theta=st.floats(-5, 5, allow_nan=False))
    def test_match_direct(self, X, theta):
        assert rel(K.cos_sum(X, theta), K.cos_sum_direct(X, theta)) <= 1e-9
        assert rel(K.sin_sum(X, theta), K.sin_sum_direct(X, theta)) <= 1e-9
