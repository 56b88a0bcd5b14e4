"""Sieve seeds ``g``, the sieved function ``f = g * 1`` and its basic sums."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from . import _backend

PRESETS = ("delta1", "ones", "moebius", "random_bounded")

# int64 headroom kept free when deciding whether integer kernels are safe
_INT64_SAFE = 2**62


class SieveError(ValueError):
    """Raised for invalid seeds, ranges or scale parameters."""


@dataclass(frozen=True)
class GFunction:
    """A finitely supported seed ``g`` on ``[1, Q]``.

    ``values[q - 1]`` is ``g(q)``; ``g(q) = 0`` for ``q > Q`` is implied.
    """

    support_bound: int
    values: tuple[Fraction, ...]
    preset_tag: str = "custom"
    seed: int | None = None
    bound: Fraction | None = None

    def __post_init__(self):
        if self.support_bound < 1:
            raise SieveError(f"support bound must be >= 1, got {self.support_bound}")
        if len(self.values) != self.support_bound:
            raise SieveError("values must have exactly support_bound entries")
        if self.bound is not None and any(abs(v) > self.bound for v in self.values):
            raise SieveError(f"a seed value exceeds the declared bound {self.bound}")

    @property
    def Q(self) -> int:
        return self.support_bound

    def __call__(self, q: int) -> Fraction:
        if 1 <= q <= self.support_bound:
            return self.values[q - 1]
        return Fraction(0)

    @property
    def denominator(self) -> int:
        """Least common denominator of the seed values."""
        return reduce(math.lcm, (v.denominator for v in self.values), 1)

    def scaled_array(self) -> np.ndarray:
        """Integer array ``D * g`` indexed ``0..Q`` (slot 0 unused), ``D = denominator``."""
        D = self.denominator
        nums = [int(v * D) for v in self.values]
        dtype = np.int64 if max(map(abs, nums), default=0) < _INT64_SAFE else object
        return np.array([0] + nums, dtype=dtype)

    def float_array(self) -> np.ndarray:
        return np.array([0.0] + [float(v) for v in self.values])


def _moebius_upto(Q: int) -> list[int]:
    mu = [1] * (Q + 1)
    is_comp = [False] * (Q + 1)
    for p in range(2, Q + 1):
        if is_comp[p]:
            continue
        for k in range(2 * p, Q + 1, p):
            is_comp[k] = True
        for k in range(p, Q + 1, p):
            mu[k] = -mu[k]
        for k in range(p * p, Q + 1, p * p):
            mu[k] = 0
    return mu[1:]


def make_g(
    preset: str,
    Q: int,
    seed: int | None = None,
    bound: int | Fraction | None = None,
) -> GFunction:
    """Build one of the four preset seeds.

    ``random_bounded`` draws integers uniformly from ``[-bound, bound]``
    (default ``bound = 1``) with ``numpy.random.default_rng(seed)``; ``seed``
    is required for it and rejected for the deterministic presets.
    """
    if preset not in PRESETS:
        raise SieveError(f"unknown preset {preset!r}; expected one of {PRESETS}")
    if Q < 1:
        raise SieveError(f"Q must be >= 1, got {Q}")
    if (preset == "random_bounded") != (seed is not None):
        raise SieveError("seed is required for random_bounded and only for it")

    if preset == "delta1":
        ints = [1] + [0] * (Q - 1)
        declared = Fraction(1)
    elif preset == "ones":
        ints = [1] * Q
        declared = Fraction(1)
    elif preset == "moebius":
        ints = _moebius_upto(Q)
        declared = Fraction(1)
    else:
        declared = Fraction(1 if bound is None else bound)
        top = math.floor(declared)
        rng = np.random.default_rng(seed)
        ints = rng.integers(-top, top, size=Q, endpoint=True).tolist()
    return GFunction(Q, tuple(Fraction(v) for v in ints), preset, seed, declared)


def g_from_values(values: Sequence[int | Fraction], bound=None) -> GFunction:
    vals = tuple(Fraction(v) for v in values)
    return GFunction(len(vals), vals, "custom", None, None if bound is None else Fraction(bound))


@dataclass(frozen=True)
class SieveTable:
    """Values ``f(lo) .. f(hi)`` of ``f = g * 1``.

    ``scaled`` holds the integers ``D * f(n)`` with ``D = g.denominator``;
    exact values are ``scaled / D``. ``values`` is the float64 view.
    """

    lo: int
    hi: int
    scaled: np.ndarray
    denominator: int
    g_ref: GFunction
    values: np.ndarray = field(repr=False)

    def __len__(self):
        return self.hi - self.lo + 1

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi

    def require(self, lo: int, hi: int) -> None:
        if not self.covers(lo, hi):
            raise SieveError(
                f"sieve table [{self.lo}, {self.hi}] does not cover [{lo}, {hi}]"
            )

    def __getitem__(self, n: int) -> Fraction:
        if not self.lo <= n <= self.hi:
            raise IndexError(n)
        return Fraction(int(self.scaled[n - self.lo]), self.denominator)

    def exact_values(self) -> list[Fraction]:
        D = self.denominator
        return [Fraction(int(v), D) for v in self.scaled]

    def sup_scaled(self, lo: int | None = None, hi: int | None = None) -> int:
        lo = self.lo if lo is None else max(lo, self.lo)
        hi = self.hi if hi is None else min(hi, self.hi)
        seg = self.scaled[lo - self.lo : hi - self.lo + 1]
        return int(max(abs(int(seg.max())), abs(int(seg.min()))))

    def sup(self, lo: int | None = None, hi: int | None = None) -> Fraction:
        """``max |f(n)|`` over ``[lo, hi]`` (whole table by default), exactly."""
        return Fraction(self.sup_scaled(lo, hi), self.denominator)

    @property
    def sup_norm(self) -> Fraction:
        return self.sup()


def sieve_f(g: GFunction, lo: int, hi: int) -> SieveTable:
    """Sieve ``f(n) = sum_{d | n, d <= Q} g(d)`` for ``lo <= n <= hi``.

    Multiples sweep: every ``d <= Q`` adds ``g(d)`` to each of its multiples
    in range. Partitioning ``[lo, hi]`` into disjoint pieces and sieving
    each one gives identical values.
    """
    if not (1 <= lo <= hi):
        raise SieveError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    gs = g.scaled_array()
    # |f| <= sum |g|, so int64 is safe whenever that sum is
    if gs.dtype != object and int(np.abs(gs).sum()) < _INT64_SAFE:
        out = np.zeros(hi - lo + 1, dtype=np.int64)
        _backend.ACTIVE.sieve(out, lo, gs)
    else:
        out = np.zeros(hi - lo + 1, dtype=object)
        _backend.NUMPY.sieve(out, lo, gs)
    D = g.denominator
    return SieveTable(lo, hi, out, D, g, out.astype(np.float64) / D)


def sieve_partitioned(g: GFunction, lo: int, hi: int, parts: int) -> SieveTable:
    """Sieve ``[lo, hi]`` as ``parts`` disjoint blocks and stitch them."""
    edges = np.linspace(lo, hi + 1, parts + 1).astype(np.int64)
    blocks = [sieve_f(g, int(a), int(b) - 1) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    scaled = np.concatenate([b.scaled for b in blocks])
    D = g.denominator
    return SieveTable(lo, hi, scaled, D, g, scaled.astype(np.float64) / D)


def f_bruteforce(g: GFunction, n: int) -> Fraction:
    """``f(n)`` by trial division (oracle)."""
    return sum((g(d) for d in range(1, min(n, g.Q) + 1) if n % d == 0), Fraction(0))


def mean_value(g: GFunction, h: int) -> Fraction:
    """Expected window sum ``M_f(2h) = 2h * sum_d g(d)/d``."""
    if h < 1:
        raise SieveError(f"h must be >= 1, got {h}")
    return 2 * h * sum((v / d for d, v in enumerate(g.values, 1)), Fraction(0))


def dyadic_sum(f: SieveTable, N: int) -> Fraction:
    """``sum_{N < n <= 2N} f(n)`` read off the table."""
    f.require(N + 1, 2 * N)
    seg = f.scaled[N + 1 - f.lo : 2 * N + 1 - f.lo]
    total = int(seg.sum()) if seg.dtype != object else sum(int(v) for v in seg)
    return Fraction(total, f.denominator)


def dyadic_sum_by_divisors(g: GFunction, N: int) -> Fraction:
    """``sum_d g(d) ([2N/d] - [N/d])``: counts multiples of each ``d`` in ``(N, 2N]``."""
    return sum(
        (v * (2 * N // d - N // d) for d, v in enumerate(g.values, 1)), Fraction(0)
    )


@dataclass(frozen=True)
class ScaleParams:
    N: int
    h: int
    Q: int

    def __post_init__(self):
        if self.N < 1 or self.h < 1 or self.Q < 1:
            raise SieveError("N, h and Q must be positive")
        if 4 * self.h >= self.N:
            raise SieveError(f"need h < N/4, got N={self.N}, h={self.h}")
        if self.Q > 2 * self.N:
            raise SieveError(f"need Q <= 2N, got N={self.N}, Q={self.Q}")

    @property
    def theta(self) -> float:
        return math.log(self.h) / math.log(self.N)

    @property
    def lam(self) -> float:
        return math.log(self.Q) / math.log(self.N)

    @classmethod
    def from_exponents(cls, N: int, theta: float, lam: float) -> "ScaleParams":
        """Round ``N**theta`` and ``N**lam`` to the nearest integers."""
        if not (0 < theta < 1):
            raise SieveError(f"theta must lie in (0, 1), got {theta}")
        if not (0 <= lam < 1):
            raise SieveError(f"lambda must lie in [0, 1), got {lam}")
        h = math.floor(N**theta + 0.5)
        Q = max(1, math.floor(N**lam + 0.5))
        return cls(N, h, Q)


def experiment_table(g: GFunction, N: int, h: int) -> SieveTable:
    """Sieve ``[1, 2N + 4h]``, enough for every lag and overhang used downstream."""
    return sieve_f(g, 1, 2 * N + 4 * h)
