"""Shared brute-force oracles. They never call the code paths they check."""

from fractions import Fraction

import pytest

from sievelab.arith import PRESETS, make_g


def brute_f(g, n):
    return sum((g(d) for d in range(1, n + 1) if n % d == 0), Fraction(0))


def brute_values(g, hi):
    return {n: brute_f(g, n) for n in range(1, hi + 1)}


def brute_correlation(fv, N, a):
    return sum((fv[n] * fv[n - a] for n in range(N + 1, 2 * N + 1)), Fraction(0))


def brute_selberg(fv, N, h, M):
    total = Fraction(0)
    for m in range(N, 2 * N):
        s = sum(fv[n] for n in range(m - h + 1, m + h + 1))
        total += (s - M) ** 2
    return total


def brute_symmetry(fv, N, h):
    total = Fraction(0)
    for m in range(N, 2 * N):
        right = sum(fv[n] for n in range(m + 1, m + h + 1))
        left = sum(fv[n] for n in range(m - h + 1, m + 1))
        total += (right - left) ** 2
    return total


def preset_g(preset, Q):
    if preset == "random_bounded":
        return make_g(preset, Q, seed=11, bound=2)
    return make_g(preset, Q)


@pytest.fixture(params=PRESETS)
def preset(request):
    return request.param
