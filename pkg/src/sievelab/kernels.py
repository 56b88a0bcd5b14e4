"""Weights ``W`` and ``S`` and their exponential sums.

``W`` is the oscillating weight that comes from the signed window,
``S(a) = max(2h - |a|, 0)`` the Fejer-type weight. Both live on
``[-2h, 2h]`` and take the value ``2h`` at the origin. Pointwise values are
exact integers; Fourier-side sums are floats.

Every closed form here has a ``sin(pi beta)`` style denominator that is
``0/0`` at integer frequencies. Below ``SINGULAR_TOL`` (distance to the
nearest integer) the direct sum, which is the defining value, is used instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

SINGULAR_TOL = 1e-6
FAMILIES = ("W", "S")


@dataclass(frozen=True)
class KernelSpec:
    family: str
    h: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.h < 1:
            raise ValueError(f"h must be >= 1, got {self.h}")

    def __call__(self, a: int) -> int:
        return kernel_value(self, a)

    def values(self) -> np.ndarray:
        """``K(0), K(1), ..., K(2h)`` as int64."""
        return np.array([kernel_value(self, a) for a in range(2 * self.h + 1)], dtype=np.int64)

    def full(self) -> tuple[np.ndarray, np.ndarray]:
        """Lags ``-2h..2h`` and the matching weights."""
        lags = np.arange(-2 * self.h, 2 * self.h + 1)
        return lags, np.array([kernel_value(self, int(a)) for a in lags], dtype=np.int64)


def W_value(h: int, a: int) -> int:
    a = abs(a)
    if a <= h:
        return 2 * h - 3 * a
    if a <= 2 * h:
        return a - 2 * h
    return 0


def S_value(h: int, a: int) -> int:
    return max(2 * h - abs(a), 0)


def kernel_value(k: KernelSpec, a: int) -> int:
    return W_value(k.h, a) if k.family == "W" else S_value(k.h, a)


def dist_to_int(r):
    """Distance from ``r`` to the nearest integer; works on scalars and arrays."""
    if isinstance(r, Fraction):
        return abs(r - round(r))
    return np.abs(r - np.round(r)) if isinstance(r, np.ndarray) else abs(r - round(r))


def _reduce(beta):
    # beta - nearest integer is exact in binary floating point and leaves
    # every periodic quantity unchanged
    return beta - np.round(beta)


def sum_W_over_multiples(h: int, q: int) -> Fraction:
    """``sum_{a = 0 mod q} W(a)`` in closed form ``2q ||h/q||``."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    return 2 * q * dist_to_int(Fraction(h, q))


def sum_W_over_multiples_direct(h: int, q: int) -> int:
    return sum(W_value(h, a) for a in range(-2 * h, 2 * h + 1) if a % q == 0)


def _fsum_axis0(terms: np.ndarray) -> np.ndarray:
    if terms.ndim == 1:
        return np.array(math.fsum(terms))
    return np.array([math.fsum(col) for col in terms.T])


def direct_cos_sum(weights: np.ndarray, lags: np.ndarray, beta, compensated=False):
    """``sum_a weights[a] cos(2 pi lags[a] beta)``, vectorized over ``beta``.

    ``compensated=True`` uses ``math.fsum`` per frequency (slow, exact-ish);
    the default uses numpy's pairwise reduction.
    """
    b = np.asarray(beta, dtype=np.float64)
    terms = weights.astype(np.float64)[:, None] * np.cos(
        2.0 * np.pi * np.outer(lags, _reduce(b).ravel())
    )
    out = _fsum_axis0(terms) if compensated else terms.sum(axis=0)
    return out.reshape(b.shape) if b.ndim else float(out.ravel()[0])


def fourier_W_direct(h: int, beta, compensated=False):
    lags, w = KernelSpec("W", h).full()
    return direct_cos_sum(w, lags, beta, compensated)


def fourier_W(h: int, beta):
    """``sum_{|a| <= 2h} W(a) e(a beta) = 4 sin^4(pi h beta) / sin^2(pi beta)``."""
    b = _reduce(np.asarray(beta, dtype=np.float64))
    safe = np.abs(b) >= SINGULAR_TOL
    bs = np.where(safe, b, 0.5)
    closed = 4.0 * np.sin(np.pi * h * bs) ** 4 / np.sin(np.pi * bs) ** 2
    if not safe.all():
        closed = np.where(safe, closed, fourier_W_direct(h, np.where(safe, 0.0, b), True))
    return closed if closed.ndim else float(closed)


def cos_sum(X: int, theta):
    """``C_X(theta) = sum_{1 <= n <= X} cos(2 pi n theta)``; ``X`` when theta is an integer."""
    t = _reduce(np.asarray(theta, dtype=np.float64))
    safe = np.abs(t) >= SINGULAR_TOL
    ts = np.where(safe, t, 0.5)
    closed = np.sin(2 * np.pi * ts * X) / (2 * np.tan(np.pi * ts)) - (
        1 - np.cos(2 * np.pi * ts * X)
    ) / 2
    if not safe.all():
        closed = np.where(safe, closed, cos_sum_direct(X, np.where(safe, 0.0, t)))
    return closed if closed.ndim else float(closed)


def sin_sum(X: int, theta):
    """``S_X(theta) = sum_{1 <= n <= X} sin(2 pi n theta)``; ``0`` when theta is an integer."""
    t = _reduce(np.asarray(theta, dtype=np.float64))
    safe = np.abs(t) >= SINGULAR_TOL
    ts = np.where(safe, t, 0.5)
    closed = np.sin(np.pi * ts * X) ** 2 / np.tan(np.pi * ts) + np.sin(2 * np.pi * ts * X) / 2
    if not safe.all():
        closed = np.where(safe, closed, sin_sum_direct(X, np.where(safe, 0.0, t)))
    return closed if closed.ndim else float(closed)


def cos_sum_direct(X: int, theta):
    n = np.arange(1, X + 1)
    return direct_cos_sum(np.ones(X, dtype=np.int64), n, theta)


def sin_sum_direct(X: int, theta):
    t = np.asarray(theta, dtype=np.float64)
    n = np.arange(1, X + 1)
    out = np.sin(2 * np.pi * np.outer(n, _reduce(t).ravel())).sum(axis=0)
    return out.reshape(t.shape) if t.ndim else float(out[0])


def _E(X, beta):
    # sum_{0 <= |a| <= X} e(a beta) for real X >= 0
    return 1.0 + 2.0 * np.asarray(cos_sum(math.floor(X), beta)) if X >= 1 else np.ones_like(beta)


def _fejer_sq(A: int, beta):
    # sum_{|a| <= A} (A - |a|) e(a beta) = sin^2(pi A beta) / sin^2(pi beta)
    return np.sin(np.pi * A * beta) ** 2 / np.sin(np.pi * beta) ** 2


def fourier_W_scaled(h: int, ell: int, beta):
    """``(1/ell) sum_a W(a ell) e(a beta)`` via the two-case closed form.

    With ``A = [h/ell]``, ``fa = {h/ell}``, ``fb = {2h/ell}``:

    * ``fa < 1/2``: ``[2h/ell] = 2A`` and the leading term is the squared
      Fejer kernel ``4 sin^4(pi A beta) / sin^2(pi beta)``;
    * ``fa >= 1/2``: ``[2h/ell] = 2A + 1`` and ``-E_{2A}(beta)`` joins in,
      since ``2 fa - fb = 1`` there.

    Both cases then add ``4 fa E_{h/ell}(beta) - fb E_{2h/ell}(beta)``. For
    ``ell = 1`` both fractional parts vanish and the result is ``fourier_W``.
    """
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    b = _reduce(np.asarray(beta, dtype=np.float64))
    safe = np.abs(b) >= SINGULAR_TOL
    bs = np.where(safe, b, 0.5)

    A, ra = divmod(h, ell)
    B, rb = divmod(2 * h, ell)
    fa, fb = ra / ell, rb / ell
    out = 2.0 * (1.0 - np.cos(2 * np.pi * bs * A)) * _fejer_sq(A, bs)
    if 2 * ra >= ell:
        # second case: [2h/ell] = 2A + 1, 2fa - fb = 1
        assert B == 2 * A + 1
        out = out - _E(2 * A, bs)
    else:
        assert B == 2 * A
    out = out + 4.0 * fa * _E(h / ell, bs) - fb * _E(2 * h / ell, bs)

    if not safe.all():
        out = np.where(safe, out, fourier_W_scaled_direct(h, ell, np.where(safe, 0.0, b)))
    return out if out.ndim else float(out)


def fourier_W_scaled_first_form(h: int, ell: int, beta):
    """Same quantity via the single-line form (no case split); for cross-checks."""
    b = _reduce(np.asarray(beta, dtype=np.float64))
    A, B = h // ell, 2 * h // ell
    fa, fb = (h % ell) / ell, (2 * h % ell) / ell
    s = np.sin
    out = (4 * s(np.pi * b * A) ** 2 - s(np.pi * b * B) ** 2) / s(np.pi * b) ** 2
    out = out + 4 * fa * _E(h / ell, b) - fb * _E(2 * h / ell, b)
    return out if out.ndim else float(out)


def fourier_W_scaled_direct(h: int, ell: int, beta, compensated=False):
    A = 2 * h // ell
    lags = np.arange(-A, A + 1)
    w = np.array([W_value(h, int(a) * ell) for a in lags], dtype=np.int64)
    return direct_cos_sum(w, lags, beta, compensated) / ell


def W_spectrum(h: int, ell: int, alphas) -> np.ndarray:
    """``sum_b W(ell b) cos(2 pi b alpha)`` by direct summation."""
    return ell * np.asarray(fourier_W_scaled_direct(h, ell, alphas))


def spectrum_nonneg_check(h: int, ell: int, alphas) -> bool:
    """True iff the ``ell``-sampled W spectrum is ``>= -1e-9 (2h)^2`` at every alpha."""
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    vals = W_spectrum(h, ell, np.atleast_1d(np.asarray(alphas, dtype=np.float64)))
    return bool(np.all(vals >= -1e-9 * (2 * h) ** 2))


def fejer_S_direct(h: int, j: int, q: int, compensated=False) -> float:
    lags, s = KernelSpec("S", h).full()
    return direct_cos_sum(s, lags, j / q, compensated)


def fejer_S(h: int, j: int, q: int) -> float:
    """``sum_a S(a) e_q(j a) = sin^2(2 pi j h / q) / sin^2(pi j / q)``; ``4h^2`` when ``q | j``."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    r = j % q
    if r == 0:
        return float(4 * h * h)
    # distance of j/q to Z is at least 1/q, well above SINGULAR_TOL for any
    # realistic q; fall back anyway for absurd moduli
    if min(r, q - r) / q < SINGULAR_TOL:
        return fejer_S_direct(h, j, q, True)
    x = r / q
    return math.sin(2 * math.pi * h * x) ** 2 / math.sin(math.pi * x) ** 2


def fejer_S_beta(h: int, beta):
    """Fejer form at an arbitrary real frequency (vectorized)."""
    b = _reduce(np.asarray(beta, dtype=np.float64))
    safe = np.abs(b) >= SINGULAR_TOL
    bs = np.where(safe, b, 0.5)
    out = _fejer_sq(2 * h, bs)
    if not safe.all():
        lags, s = KernelSpec("S", h).full()
        out = np.where(safe, out, direct_cos_sum(s, lags, np.where(safe, 0.0, b)))
    return out if out.ndim else float(out)


def fejer_S_beta_direct(h: int, beta):
    lags, s = KernelSpec("S", h).full()
    return direct_cos_sum(s, lags, beta)


def kernel_sum(k: KernelSpec) -> int:
    """``sum_a K(a)`` over the integers, exactly: 0 for ``W``, ``4h^2`` for ``S``."""
    return int(k.full()[1].sum())
