"""Closed-form vs direct-sum checks for every kernel identity."""

from __future__ import annotations

import numpy as np

from . import kernels as K


def _rel_err(closed, direct) -> float:
    closed, direct = np.asarray(closed), np.asarray(direct)
    return float(np.max(np.abs(closed - direct) / (1.0 + np.abs(direct))))


def run_selfcheck(
    h_max: int = 50, q_max: int = 50, n_beta: int = 1000, tol: float = 1e-9, seed: int = 0
) -> list[tuple[str, bool, str]]:
    """Return ``(name, passed, detail)`` per identity family."""
    rng = np.random.default_rng(seed)
    results = []

    bad = [
        (h, q)
        for h in range(1, h_max + 1)
        for q in range(1, q_max + 1)
        if K.sum_W_over_multiples(h, q) != K.sum_W_over_multiples_direct(h, q)
    ]
    results.append(
        ("W over multiples of q", not bad, f"h<={h_max}, q<={q_max}, exact; mismatches={bad[:3]}")
    )

    sums_ok = all(
        K.kernel_sum(K.KernelSpec("W", h)) == 0 and K.kernel_sum(K.KernelSpec("S", h)) == 4 * h * h
        for h in range(1, max(h_max, 100) + 1)
    )
    results.append(("sum W = 0, sum S = 4h^2", sums_ok, "exact integers, h<=max(h_max,100)"))

    worst = {"fourier_W": 0.0, "fourier_W_scaled": 0.0, "fejer_S": 0.0, "cos_sum": 0.0, "sin_sum": 0.0}
    fejer_min = np.inf
    for h in range(1, h_max + 1):
        beta = rng.random(n_beta)
        worst["fourier_W"] = max(worst["fourier_W"], _rel_err(K.fourier_W(h, beta), K.fourier_W_direct(h, beta)))
        for ell in range(1, 2 * h + 1):
            worst["fourier_W_scaled"] = max(
                worst["fourier_W_scaled"],
                _rel_err(K.fourier_W_scaled(h, ell, beta), K.fourier_W_scaled_direct(h, ell, beta)),
            )
        fs = K.fejer_S_beta(h, beta)
        fejer_min = min(fejer_min, float(fs.min()))
        worst["fejer_S"] = max(worst["fejer_S"], _rel_err(fs, K.fejer_S_beta_direct(h, beta)))
        # the rational-frequency entry point too
        for q in (1, 2, 3, 5, 7, 2 * h + 1):
            for j in range(q):
                val = K.fejer_S(h, j, q)
                fejer_min = min(fejer_min, val)
                worst["fejer_S"] = max(worst["fejer_S"], _rel_err(val, K.fejer_S_direct(h, j, q)))
        for X in (h, 2 * h):
            worst["cos_sum"] = max(worst["cos_sum"], _rel_err(K.cos_sum(X, beta), K.cos_sum_direct(X, beta)))
            worst["sin_sum"] = max(worst["sin_sum"], _rel_err(K.sin_sum(X, beta), K.sin_sum_direct(X, beta)))
    for name, err in worst.items():
        results.append((f"{name} closed form", err <= tol, f"max rel err {err:.3g} (tol {tol:g})"))
    results.append(("Fejer nonnegativity", fejer_min >= 0.0, f"min value {fejer_min:.3g}"))
    return results
