"""Selberg and symmetry integrals of ``f`` over ``x in [N, 2N]``.

Both integrands are step functions of ``x``. For ``x`` in the open interval
``(m, m+1)`` with ``m`` an integer:

* ``{n : 0 < |n - x| <= h}`` is exactly ``[m - h + 1, m + h]``, because
  ``n >= x - h > m - h`` and ``n <= x + h < m + h + 1``;
* ``sgn(n - x) = +1`` for ``n in [m + 1, m + h]`` and ``-1`` for
  ``n in [m - h + 1, m]``; ``n = x`` never happens.

The integers themselves have measure zero, so the integral over ``[N, 2N]``
is the sum over ``m = N .. 2N-1`` of the value on ``(m, m+1)``. This is the
whole reduction; ``quadrature_oracle`` re-derives each value from the literal
definition at sample points and must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _backend
from .arith import _INT64_SAFE, SieveError, SieveTable, mean_value

KINDS = ("selberg", "symmetry")


@dataclass(frozen=True)
class IntegralResult:
    kind: str
    value: Fraction | float
    N: int
    h: int
    mean_used: Fraction | float | None = None
    # set when Q > N, outside the regime where M_f(2h) is the natural mean
    large_support: bool = False


def _check(f: SieveTable, N: int, h: int) -> None:
    if h < 1 or N < 1:
        raise SieveError(f"need N, h >= 1, got N={N}, h={h}")
    f.require(N - h + 1, 2 * N + h - 1)


def window_sums(f: SieveTable, N: int, h: int, mode: str = "exact"):
    """Two-sided and signed window sums for ``m = N .. 2N-1``.

    Exact mode returns scaled integers (divide by ``f.denominator``); float
    mode returns float64 values of ``f``.
    """
    _check(f, N, h)
    if mode == "float":
        return _backend.ACTIVE.windows(f.values, f.lo, N, h)
    arr = f.scaled
    # each window sum is bounded by 2h * max|D f|
    if arr.dtype != object and 2 * h * f.sup_scaled() < _INT64_SAFE:
        return _backend.ACTIVE.windows(arr, f.lo, N, h)
    return _backend.NUMPY.windows(arr.astype(object), f.lo, N, h)


def _exact_moments(w: np.ndarray) -> tuple[int, int]:
    # sum w and sum w^2 as Python ints, via int64 only when provably safe
    if w.dtype != object and len(w):
        peak = int(np.abs(w).max())
        if len(w) * peak * peak < _INT64_SAFE:
            return int(w.sum()), int(np.dot(w, w))
    vals = [int(v) for v in w]
    return sum(vals), sum(v * v for v in vals)


def selberg_integral(
    f: SieveTable, N: int, h: int, M=None, mode: str = "exact"
) -> IntegralResult:
    """``J_f(N, h) = sum_{m=N}^{2N-1} (sum_{n=m-h+1}^{m+h} f(n) - M)^2``.

    ``M`` defaults to ``mean_value(g, h)``. Exact mode expands the square,
    ``sum w^2 - 2 M D sum w + N D^2 M^2`` over ``D^2``, so that only two
    integer moments are accumulated.
    """
    if M is None:
        M = mean_value(f.g_ref, h)
    two, _ = window_sums(f, N, h, mode)
    big = f.g_ref.Q > N
    if mode == "float":
        dev = two - float(M)
        return IntegralResult("selberg", float(np.dot(dev, dev)), N, h, float(M), big)
    M = Fraction(M)
    D = f.denominator
    s1, s2 = _exact_moments(two)
    value = (s2 - 2 * M * D * s1 + N * D * D * M * M) / (D * D)
    return IntegralResult("selberg", value, N, h, M, big)


def symmetry_integral(f: SieveTable, N: int, h: int, mode: str = "exact") -> IntegralResult:
    """``I_f(N, h) = sum_{m=N}^{2N-1} (sum_{m<n<=m+h} f(n) - sum_{m-h<n<=m} f(n))^2``."""
    _, signed = window_sums(f, N, h, mode)
    big = f.g_ref.Q > N
    if mode == "float":
        return IntegralResult("symmetry", float(np.dot(signed, signed)), N, h, None, big)
    D = f.denominator
    _, s2 = _exact_moments(signed)
    return IntegralResult("symmetry", Fraction(s2, D * D), N, h, None, big)


def quadrature_oracle(
    f: SieveTable,
    N: int,
    h: int,
    kind: str,
    M=None,
    samples_per_unit: int = 4,
) -> Fraction:
    """Midpoint rule on the literal integrand, in exact rationals.

    ``x`` runs over ``N + (2i + 1) / (2k)`` for ``i < kN``; the window
    ``{n : 0 < |n - x| <= h}`` and ``sgn(n - x)`` are decided by integer
    comparisons of ``2k n`` against ``2k x``, with no appeal to the
    unit-interval argument. Exact for step integrands at any ``k >= 1``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown integral kind {kind!r}")
    if samples_per_unit < 1:
        raise ValueError("samples_per_unit must be >= 1")
    if kind == "selberg" and M is None:
        M = mean_value(f.g_ref, h)
    k = samples_per_unit
    D = f.denominator
    f.require(N - h + 1, 2 * N + h - 1)

    i = np.arange(k * N, dtype=np.int64)
    twok_x = 2 * k * N + 2 * i + 1
    # candidates: a margin of one beyond [x - h, x + h]; membership below is
    # decided only by the literal inequalities
    base = N + i // k
    cand = base[:, None] + np.arange(-h - 1, h + 2)[None, :]
    diff = 2 * k * cand - twok_x[:, None]  # 2k (n - x), never 0 at midpoints
    inside = np.abs(diff) <= 2 * k * h
    if kind == "selberg":
        weight = (inside & (diff != 0)).astype(np.int64)
    else:
        weight = np.sign(diff) * inside

    pad = h + 2
    ext = np.zeros(len(f) + 2 * pad, dtype=object)
    ext[pad:-pad] = [int(v) for v in f.scaled]
    idx = cand - f.lo + pad
    outside = (cand < f.lo) | (cand > f.hi)
    if np.any(outside & (weight != 0)):
        raise SieveError("sieve table too short for the quadrature window")
    sums = (ext[idx] * weight).sum(axis=1)

    total = Fraction(0)
    for s in sums:
        dev = Fraction(int(s), D) - (M if kind == "selberg" else 0)
        total += dev * dev
    return total / k
