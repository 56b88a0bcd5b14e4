"""Hot numeric kernels.

Every kernel exists twice: a loop version compiled with ``numba.njit`` and a
vectorized pure-numpy version. Which one the rest of the package calls is
decided once at import time:

* ``SIEVELAB_DISABLE_JIT=1`` (or numba missing) selects the numpy path;
* otherwise the jitted path is used.

Both paths are importable explicitly as ``JIT`` and ``NUMPY`` so the two can
be compared in tests and in ``benchmarks/bench_backends.py``. Kernels are
dtype-generic: int64 arrays give exact integer results (callers guard
against overflow), float64 arrays give the float mode.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_FLAG = os.environ.get("SIEVELAB_DISABLE_JIT", "").strip().lower()
USE_JIT = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


# ---------------------------------------------------------------------------
# loop implementations (compiled by numba when available)
# ---------------------------------------------------------------------------


def _sieve_loop(out, lo, g):
    # g[0] is unused; g[d] is the seed value at d
    hi = lo + out.shape[0] - 1
    for d in range(1, g.shape[0]):
        v = g[d]
        if v == 0:
            continue
        start = ((lo + d - 1) // d) * d
        for n in range(start, hi + 1, d):
            out[n - lo] += v
    return out


def _windows_loop(f, base, N, h):
    # two-sided sums over [m-h+1, m+h] and signed sums right-minus-left,
    # for m = N .. 2N-1; f[i] holds the value at base + i
    two = np.empty(N, dtype=f.dtype)
    signed = np.empty(N, dtype=f.dtype)
    left = f[0] - f[0]
    right = f[0] - f[0]
    m = N
    for n in range(m - h + 1, m + 1):
        left += f[n - base]
    for n in range(m + 1, m + h + 1):
        right += f[n - base]
    two[0] = left + right
    signed[0] = right - left
    for k in range(1, N):
        m = N + k
        # slide: [m-h+1, m] gains m, loses m-h; [m+1, m+h] gains m+h, loses m
        left += f[m - base] - f[m - h - base]
        right += f[m + h - base] - f[m - base]
        two[k] = left + right
        signed[k] = right - left
    return two, signed


def _correlations_loop(f, base, N, lags):
    out = np.zeros(lags.shape[0], dtype=f.dtype)
    for i in range(lags.shape[0]):
        a = lags[i]
        acc = f[0] - f[0]
        for n in range(N + 1, 2 * N + 1):
            acc += f[n - base] * f[n - a - base]
        out[i] = acc
    return out


def _residue_counts_loop(q, d, m_lo, m_hi):
    counts = np.zeros(q, dtype=np.int64)
    for m in range(m_lo + 1, m_hi + 1):
        counts[(d * m) % q] += 1
    return counts


def _charsum_pair_loop(q, d, b, m_lo, m_hi, cos_table):
    # Re sum_{j=1}^{q-1} e_q(-j b) sum_{m_lo < m <= m_hi} e_q(j d m)
    counts = _residue_counts_loop(q, d, m_lo, m_hi)
    total = 0.0
    for j in range(1, q):
        acc = 0.0
        for r in range(q):
            c = counts[r]
            if c != 0:
                acc += c * cos_table[(j * (r - b)) % q]
        total += acc
    return total


def _remainder_charsum_loop(g, N, a):
    # g: float64 seed values, g[0] unused; a != 0
    Q = g.shape[0] - 1
    aa = abs(a)
    total = 0.0
    for ell in range(1, min(aa, Q) + 1):
        if aa % ell != 0:
            continue
        b = a // ell
        top = Q // ell
        for q in range(2, top + 1):
            gq = g[ell * q]
            if gq == 0.0:
                continue
            cos_table = np.empty(q)
            for k in range(q):
                cos_table[k] = np.cos(2.0 * np.pi * k / q)
            for d in range(1, top + 1):
                gd = g[ell * d]
                if gd == 0.0:
                    continue
                x, y = d, q
                while y:
                    x, y = y, x % y
                if x != 1:
                    continue
                k = ell * d
                s = _charsum_pair_loop(q, d, b % q, N // k, (2 * N) // k, cos_table)
                total += gd * gq * s / q
    return total


def _weighted_charsum_loop(g, N, kvals, max_ell):
    # sum_{ell<=max_ell} sum_{(d,q)=1} g g / q sum_{j=1}^{q-1}
    #   [sum_m cos(2 pi j d m / q)] * [sum_{a != 0} K(a ell) cos(2 pi j a / q)]
    # kvals[t] = K(t) for t = 0 .. len-1, zero beyond
    Q = g.shape[0] - 1
    total = 0.0
    for ell in range(1, min(max_ell, Q) + 1):
        top = Q // ell
        amax = (kvals.shape[0] - 1) // ell
        for q in range(2, top + 1):
            gq = g[ell * q]
            if gq == 0.0:
                continue
            cos_table = np.empty(q)
            for k in range(q):
                cos_table[k] = np.cos(2.0 * np.pi * k / q)
            khat = np.zeros(q)
            for j in range(1, q):
                acc = 0.0
                for a in range(1, amax + 1):
                    acc += 2.0 * kvals[a * ell] * cos_table[(j * a) % q]
                khat[j] = acc
            for d in range(1, top + 1):
                gd = g[ell * d]
                if gd == 0.0:
                    continue
                x, y = d, q
                while y:
                    x, y = y, x % y
                if x != 1:
                    continue
                k = ell * d
                counts = _residue_counts_loop(q, d, N // k, (2 * N) // k)
                inner = 0.0
                for j in range(1, q):
                    msum = 0.0
                    for r in range(q):
                        if counts[r] != 0:
                            msum += counts[r] * cos_table[(j * r) % q]
                    inner += msum * khat[j]
                total += gd * gq * inner / q
    return total


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------


def _sieve_np(out, lo, g):
    hi = lo + out.shape[0] - 1
    for d in np.flatnonzero(g):
        if d == 0:
            continue
        start = -(-lo // d) * d
        if start <= hi:
            out[start - lo :: d] += g[d]
    return out


def _windows_np(f, base, N, h):
    zero = np.zeros(1, dtype=f.dtype)
    csum = np.concatenate([zero, np.cumsum(f)])
    # prefix(n) = sum of f over [base, n]  ->  csum[n - base + 1]
    m = np.arange(N, 2 * N)
    pm = csum[m - base + 1]
    left = pm - csum[m - h - base + 1]
    right = csum[m + h - base + 1] - pm
    return left + right, right - left


def _correlations_np(f, base, N, lags):
    x = f[N + 1 - base : 2 * N + 1 - base]
    out = np.empty(len(lags), dtype=f.dtype)
    for i, a in enumerate(lags):
        out[i] = np.dot(x, f[N + 1 - a - base : 2 * N + 1 - a - base])
    return out


def _residue_counts_np(q, d, m_lo, m_hi):
    m = np.arange(m_lo + 1, m_hi + 1, dtype=np.int64)
    return np.bincount((d * m) % q, minlength=q)


def _charsum_pair_np(q, d, b, m_lo, m_hi, cos_table):
    counts = _residue_counts_np(q, d, m_lo, m_hi)
    j = np.arange(1, q)[:, None]
    r = np.arange(q)[None, :]
    return float((cos_table[(j * (r - b)) % q] @ counts).sum())


def _coprime_pairs(top):
    d = np.arange(1, top + 1)
    return np.gcd.outer(d, d) == 1


def _remainder_charsum_np(g, N, a):
    Q = g.shape[0] - 1
    aa = abs(a)
    total = 0.0
    for ell in range(1, min(aa, Q) + 1):
        if aa % ell:
            continue
        b = a // ell
        top = Q // ell
        cop = _coprime_pairs(top)
        for q in range(2, top + 1):
            gq = g[ell * q]
            if gq == 0:
                continue
            cos_table = np.cos(2.0 * np.pi * np.arange(q) / q)
            for d in range(1, top + 1):
                gd = g[ell * d]
                if gd == 0 or not cop[d - 1, q - 1]:
                    continue
                k = ell * d
                s = _charsum_pair_np(q, d, b % q, N // k, (2 * N) // k, cos_table)
                total += gd * gq * s / q
    return total


def _weighted_charsum_np(g, N, kvals, max_ell):
    Q = g.shape[0] - 1
    total = 0.0
    for ell in range(1, min(max_ell, Q) + 1):
        top = Q // ell
        amax = (kvals.shape[0] - 1) // ell
        cop = _coprime_pairs(top)
        a = np.arange(1, amax + 1)
        ka = 2.0 * kvals[a * ell].astype(np.float64)
        for q in range(2, top + 1):
            gq = g[ell * q]
            if gq == 0:
                continue
            cos_table = np.cos(2.0 * np.pi * np.arange(q) / q)
            j = np.arange(1, q)[:, None]
            khat = cos_table[(j * a[None, :]) % q] @ ka
            rmat = cos_table[(j * np.arange(q)[None, :]) % q]
            for d in range(1, top + 1):
                gd = g[ell * d]
                if gd == 0 or not cop[d - 1, q - 1]:
                    continue
                k = ell * d
                counts = _residue_counts_np(q, d, N // k, (2 * N) // k)
                total += gd * gq * float((rmat @ counts) @ khat) / q
    return total


NUMPY = SimpleNamespace(
    name="numpy",
    sieve=_sieve_np,
    windows=_windows_np,
    correlations=_correlations_np,
    remainder_charsum=_remainder_charsum_np,
    weighted_charsum=_weighted_charsum_np,
)

if HAVE_NUMBA:
    _njit = numba.njit(cache=True)
    _residue_counts_loop = _njit(_residue_counts_loop)
    _charsum_pair_loop = _njit(_charsum_pair_loop)
    JIT = SimpleNamespace(
        name="numba",
        sieve=_njit(_sieve_loop),
        windows=_njit(_windows_loop),
        correlations=_njit(_correlations_loop),
        remainder_charsum=_njit(_remainder_charsum_loop),
        weighted_charsum=_njit(_weighted_charsum_loop),
    )
else:  # pragma: no cover
    JIT = None

ACTIVE = JIT if USE_JIT else NUMPY


def backend_name() -> str:
    return ACTIVE.name
