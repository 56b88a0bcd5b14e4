"""Autocorrelations ``C_f(a) = sum_{N < n <= 2N} f(n) f(n - a)`` and their split.

For ``a != 0`` the correlation counts pairs of divisors,

    C_f(a) = sum_{d, q} g(d) g(q) #{N < n <= 2N : d | n, n = a (mod q)},

and the congruence is solvable only when ``gcd(d, q) | a``. Writing
``gcd = ell`` and counting ``m = n / (ell d)`` modulo ``q / ell`` splits each
count into its average ``(1/q)([2N/ell d] - [N/ell d])`` plus an oscillating
part. The averages form ``correlation_main_term``; the oscillating part is
``R_f(a)``. ``remainder_exact`` takes it as the exact difference and
``remainder_charsum`` evaluates it as a sum of additive characters;
``remainder_congruence`` counts the residue classes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce

import numpy as np

from . import _backend
from .arith import _INT64_SAFE, GFunction, SieveError, SieveTable
from .kernels import KernelSpec


def _lag_window(N: int, lags) -> tuple[int, int]:
    lags = list(lags)
    return N + 1 - max(max(lags), 0), 2 * N - min(min(lags), 0)


def correlations(f: SieveTable, N: int, lags, mode: str = "exact") -> list:
    """``C_f(a)`` for each ``a`` in ``lags``; Fractions in exact mode, floats otherwise."""
    lags = [int(a) for a in lags]
    if not lags:
        return []
    lo, hi = _lag_window(N, lags)
    f.require(lo, hi)
    arr = np.asarray(lags, dtype=np.int64)
    if mode == "float":
        return [float(v) for v in _backend.ACTIVE.correlations(f.values, f.lo, N, arr)]
    D2 = f.denominator**2
    peak = f.sup_scaled(lo, hi)
    if f.scaled.dtype != object and N * peak * peak < _INT64_SAFE:
        raw = _backend.ACTIVE.correlations(f.scaled, f.lo, N, arr)
    else:
        raw = _backend.NUMPY.correlations(f.scaled.astype(object), f.lo, N, arr)
    return [Fraction(int(v), D2) for v in raw]


def correlation_direct(f: SieveTable, N: int, a: int, mode: str = "exact"):
    """``C_f(a)`` by direct summation over ``N < n <= 2N``."""
    return correlations(f, N, [a], mode)[0]


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=4096)
def _main_term_for_ell(g: GFunction, N: int, ell: int) -> Fraction:
    # sum_{(d,q)=1} g(ell d) g(ell q) (1/q) ([2N/(ell d)] - [N/(ell d)]), grouped by q:
    # sum_q g(ell q)/q * sum_{d coprime to q} g(ell d) cnt(ell d)
    top = g.Q // ell
    if top < 1:
        return Fraction(0)
    gs = g.scaled_array()
    idx = ell * np.arange(1, top + 1)
    G = [int(v) for v in gs[idx]]
    k = ell * np.arange(1, top + 1, dtype=np.int64)
    cnt = (2 * N) // k - N // k
    cop = np.gcd.outer(np.arange(1, top + 1), np.arange(1, top + 1)) == 1
    gd_cnt = [G[i] * int(cnt[i]) for i in range(top)]
    L = reduce(math.lcm, range(1, top + 1), 1)
    num = 0
    for qi in range(top):
        if G[qi] == 0:
            continue
        inner = sum(gd_cnt[di] for di in np.flatnonzero(cop[qi]))
        num += G[qi] * inner * (L // (qi + 1))
    D = g.denominator
    return Fraction(num, L * D * D)


def correlation_main_term(g: GFunction, N: int, a: int) -> Fraction:
    """Average part of ``C_f(a)``: ``sum_{ell | a} sum_{(d,q)=1} g(ell d) g(ell q) (1/q) ([2N/ell d] - [N/ell d])``.

    Only ``ell <= Q`` can contribute since ``g(ell d) = 0`` otherwise.
    """
    if a == 0:
        raise SieveError("the main term is defined only for a != 0")
    return sum(
        (_main_term_for_ell(g, N, ell) for ell in _divisors(abs(a)) if ell <= g.Q),
        Fraction(0),
    )


def remainder_exact(g: GFunction, f: SieveTable, N: int, a: int) -> Fraction:
    """``R_f(a) = C_f(a) - main term``, exactly."""
    if a == 0:
        raise SieveError("the remainder is defined only for a != 0")
    return correlation_direct(f, N, a) - correlation_main_term(g, N, a)


def _class_count(lo: int, hi: int, r: int, q: int) -> int:
    # #{lo < m <= hi : m = r (mod q)}
    return (hi - r) // q - (lo - r) // q


def remainder_congruence(g: GFunction, N: int, a: int) -> Fraction:
    """``R_f(a)`` exactly, without reference to ``C_f(a)``.

    Each coprime pair contributes the count of ``m ~ N/(ell d)`` in the single
    residue class ``d m = a/ell (mod q)`` minus the average ``count/q``; this
    is what the character sum over ``j != 0`` evaluates to.
    """
    if a == 0:
        raise SieveError("the remainder is defined only for a != 0")
    D = g.denominator
    gs = [int(v) for v in g.scaled_array()]
    total = Fraction(0)
    for ell in _divisors(abs(a)):
        top = g.Q // ell
        if top < 1:
            break
        b = a // ell
        L = reduce(math.lcm, range(1, top + 1), 1)
        num = 0
        for d in range(1, top + 1):
            gd = gs[ell * d]
            if gd == 0:
                continue
            lo, hi = N // (ell * d), (2 * N) // (ell * d)
            span = hi - lo
            for q in range(1, top + 1):
                gq = gs[ell * q]
                if gq == 0 or math.gcd(d, q) != 1:
                    continue
                r = (b * pow(d, -1, q)) % q if q > 1 else 0
                num += gd * gq * (q * _class_count(lo, hi, r, q) - span) * (L // q)
        total += Fraction(num, L)
    return total / (D * D)


def remainder_charsum(g: GFunction, N: int, a: int) -> float:
    """``R_f(a)`` as the character sum

    ``sum_{ell | a} sum_{(d,q)=1} g(ell d) g(ell q) (1/q) sum_{j=1}^{q-1} e_q(-j a/ell) sum_{m ~ N/(ell d)} e_q(j d m)``.

    The inner ``m``-sum is accumulated exactly by residue class of ``d m``
    modulo ``q``; no geometric-series bound is used.
    """
    if a == 0:
        raise SieveError("the remainder is defined only for a != 0")
    return float(_backend.ACTIVE.remainder_charsum(g.float_array(), N, int(a)))


def pair_count(d: int, q: int, N: int, a: int) -> int:
    """``#{N < n <= 2N : d | n, n = a (mod q)}`` by scanning multiples of ``d``."""
    n = np.arange((N // d + 1) * d, 2 * N + 1, d, dtype=np.int64)
    return int(np.count_nonzero((n - a) % q == 0))


def congruence_expansion(g: GFunction, N: int, a: int, solvable_only: bool) -> Fraction:
    """``sum_{d,q} g(d) g(q) pair_count(d, q, N, a)``, optionally keeping only ``gcd(d, q) | a``."""
    total = Fraction(0)
    for d in range(1, g.Q + 1):
        gd = g(d)
        if gd == 0:
            continue
        for q in range(1, g.Q + 1):
            gq = g(q)
            if gq == 0:
                continue
            if solvable_only and a % math.gcd(d, q):
                continue
            total += gd * gq * pair_count(d, q, N, a)
    return total


@dataclass
class CorrelationTable:
    N: int
    a_max: int
    direct: dict[int, Fraction] = field(default_factory=dict)
    main: dict[int, Fraction] = field(default_factory=dict)
    remainder: dict[int, Fraction] = field(default_factory=dict)

    def __getitem__(self, a: int):
        return self.direct[a]


def build_correlation_table(
    f: SieveTable, N: int, a_max: int, mode: str = "exact", split: bool = True
) -> CorrelationTable:
    """Direct correlations for ``|a| <= a_max``; with ``split`` (exact mode only)
    also the main/remainder decomposition for ``a != 0``."""
    lags = list(range(-a_max, a_max + 1))
    values = correlations(f, N, lags, mode)
    table = CorrelationTable(N, a_max, dict(zip(lags, values)))
    if split and mode == "exact":
        for a in lags:
            if a == 0:
                continue
            main = correlation_main_term(f.g_ref, N, a)
            table.main[a] = main
            table.remainder[a] = table.direct[a] - main
    return table


def weighted_corr_sum(table: CorrelationTable, k: KernelSpec):
    """``sum_{|a| <= 2h} K(a) C_f(a)``."""
    if table.a_max < 2 * k.h:
        raise SieveError(f"correlation table reaches |a| <= {table.a_max}, need {2 * k.h}")
    lags, w = k.full()
    zero = 0.0 if isinstance(table.direct[0], float) else Fraction(0)
    return sum((int(wa) * table.direct[int(a)] for a, wa in zip(lags, w)), zero)


def weighted_remainder_sum(g: GFunction, f: SieveTable, N: int, k: KernelSpec) -> Fraction:
    """``sum_{0 < |a| <= 2h} K(a) R_f(a)``, exactly.

    The ``a = 0`` term, ``K(0) C_f(0) = 2h C_f(0)``, is not part of this sum;
    see ``diagonal_term``.
    """
    total = Fraction(0)
    lags, w = k.full()
    for a, wa in zip(lags, w):
        a, wa = int(a), int(wa)
        if a == 0 or wa == 0:
            continue
        total += wa * remainder_exact(g, f, N, a)
    return total


def diagonal_term(f: SieveTable, N: int, h: int) -> Fraction:
    """``2h C_f(0) = 2h sum_{n ~ N} f(n)^2``."""
    return 2 * h * correlation_direct(f, N, 0)


def weighted_remainder_charsum(g: GFunction, N: int, k: KernelSpec) -> float:
    """Character-sum form of ``weighted_remainder_sum``:

    ``sum_{ell <= 2h} sum_{(d,q)=1} g(ell d) g(ell q) (1/q) sum_{j != 0} sum_{m ~ N/(ell d)} cos(2 pi j d m / q) sum_{a != 0} K(a ell) e_q(j a)``.
    """
    if k.values()[0] != 2 * k.h:
        raise SieveError("weight must satisfy K(0) = 2h")
    kv = k.values().astype(np.float64)
    return float(_backend.ACTIVE.weighted_charsum(g.float_array(), N, kv, 2 * k.h))
