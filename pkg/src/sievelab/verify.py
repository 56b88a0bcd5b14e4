"""Residual checks that tie the integrals to weighted correlation sums, and
the grid runner for scaling experiments."""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .arith import (
    GFunction,
    ScaleParams,
    SieveError,
    SieveTable,
    dyadic_sum,
    experiment_table,
    make_g,
    mean_value,
)
from .correlations import CorrelationTable, build_correlation_table, weighted_corr_sum
from .integrals import selberg_integral, symmetry_integral
from .kernels import KernelSpec

LEMMAS = ("L1", "L2", "THM_I_REP")


@dataclass(frozen=True)
class ResidualReport:
    lemma: str
    lhs: Fraction | float
    rhs_main: Fraction | float
    residual: Fraction | float
    normalizer: Fraction | float
    ratio: float

    @classmethod
    def build(cls, lemma, lhs, rhs_main, normalizer) -> "ResidualReport":
        residual = lhs - rhs_main
        ratio = float(abs(residual) / normalizer) if normalizer else 0.0
        return cls(lemma, lhs, rhs_main, residual, normalizer, ratio)


def _sup_upto(f: SieveTable, N: int, h: int, mode: str):
    # max |f(n)| for n <= 2N + h
    s = f.sup(f.lo, 2 * N + h)
    return float(s) if mode == "float" else s


def _table(f, N, a_max, mode, table):
    if table is None or table.a_max < a_max:
        return build_correlation_table(f, N, a_max, mode, split=False)
    return table


def check_lemma1(
    f: SieveTable, N: int, h: int, mode: str = "exact", table: CorrelationTable | None = None
) -> ResidualReport:
    """``I_f(N, h)`` against ``sum_a W(a) C_f(a)``, normalized by ``h^3 ||f||^2``."""
    table = _table(f, N, 2 * h, mode, table)
    lhs = symmetry_integral(f, N, h, mode).value
    rhs = weighted_corr_sum(table, KernelSpec("W", h))
    sup = _sup_upto(f, N, h, mode)
    return ResidualReport.build("L1", lhs, rhs, h**3 * sup * sup)


def check_lemma2(
    f: SieveTable,
    g: GFunction,
    N: int,
    h: int,
    mode: str = "exact",
    table: CorrelationTable | None = None,
) -> ResidualReport:
    """``J_f(N, h)`` against ``sum_a S(a) C_f(a) - 4 M h sum_{n~N} f(n) + M^2 N``.

    Normalizer ``h^3 ||f||^2 + h^2 ||f|| |M|``.
    """
    table = _table(f, N, 2 * h, mode, table)
    M = mean_value(g, h)
    lhs = selberg_integral(f, N, h, M, mode).value
    dsum = dyadic_sum(f, N)
    if mode == "float":
        M, dsum = float(M), float(dsum)
    rhs = weighted_corr_sum(table, KernelSpec("S", h)) - 4 * M * h * dsum + M * M * N
    sup = _sup_upto(f, N, h, mode)
    return ResidualReport.build("L2", lhs, rhs, h**3 * sup * sup + h**2 * sup * abs(M))


def check_theorem_I_rep(
    f: SieveTable, N: int, h: int, mode: str = "exact", table: CorrelationTable | None = None
) -> ResidualReport:
    """``I_f(N, h)`` against ``2 sum_a S(a) (C_f(a) - C_f(a + h))``, normalized by ``Nh + h^3``."""
    table = _table(f, N, 3 * h, mode, table)
    lhs = symmetry_integral(f, N, h, mode).value
    lags, s = KernelSpec("S", h).full()
    zero = 0.0 if mode == "float" else Fraction(0)
    rhs = 2 * sum(
        (int(w) * (table.direct[int(a)] - table.direct[int(a) + h]) for a, w in zip(lags, s)),
        zero,
    )
    return ResidualReport.build("THM_I_REP", lhs, rhs, N * h + h**3)


# ---------------------------------------------------------------------------
# grid experiments
# ---------------------------------------------------------------------------

CSV_COLUMNS = (
    "N", "h", "Q", "theta_eff", "lambda_eff", "preset", "seed",
    "J", "I", "rep_L2", "rep_L1", "resid_L1", "resid_L2", "resid_THM",
    "bound_main", "ratio_J", "ratio_I",
)
# exact "p/q" companions of the rational columns; empty in float mode
EXACT_COLUMNS = ("J_exact", "I_exact", "rep_L2_exact", "rep_L1_exact")


@dataclass(frozen=True)
class GridConfig:
    theta: float
    lam: float
    preset: str
    n_list: tuple[int, ...]
    seed: int | None = None
    bound: int | None = None
    mode: str = "exact"

    def __post_init__(self):
        if not (0 < self.theta < 1):
            raise SieveError(f"theta must lie in (0, 1), got {self.theta}")
        if not (0 <= self.lam < 1):
            raise SieveError(f"lambda must lie in [0, 1), got {self.lam}")
        if self.mode not in ("exact", "float"):
            raise SieveError(f"mode must be exact or float, got {self.mode!r}")
        if not self.n_list or list(self.n_list) != sorted(set(self.n_list)):
            raise SieveError("n_list must be non-empty and strictly ascending")
        for N in self.n_list:
            ScaleParams.from_exponents(N, self.theta, self.lam)

    @property
    def in_corollary_region(self) -> bool:
        """Whether ``lambda < (1 + theta) / 2``, where decay in N is expected."""
        return self.lam < (1 + self.theta) / 2

    def cells(self) -> list["Cell"]:
        out = []
        for N in self.n_list:
            p = ScaleParams.from_exponents(N, self.theta, self.lam)
            out.append(Cell(N, p.h, p.Q, self.preset, self.seed, self.bound, self.mode))
        return out


@dataclass(frozen=True)
class Cell:
    N: int
    h: int
    Q: int
    preset: str
    seed: int | None = None
    bound: int | None = None
    mode: str = "exact"


@dataclass(frozen=True)
class ExperimentRecord:
    N: int
    h: int
    Q: int
    theta_eff: float
    lambda_eff: float
    preset: str
    seed: int | None
    J: Fraction | float
    I: Fraction | float
    rep_L2: Fraction | float
    rep_L1: Fraction | float
    resid_L1: float
    resid_L2: float
    resid_THM: float
    bound_main: int
    ratio_J: float
    ratio_I: float

    def as_row(self) -> dict[str, str]:
        row = {}
        for name in CSV_COLUMNS:
            v = getattr(self, name)
            if v is None:
                row[name] = ""
            elif isinstance(v, Fraction):
                row[name] = repr(float(v))
            elif isinstance(v, float):
                row[name] = repr(v)
            else:
                row[name] = str(v)
        for name in EXACT_COLUMNS:
            v = getattr(self, name.removesuffix("_exact"))
            row[name] = f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else ""
        return row

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "ExperimentRecord":
        kw = {}
        for fld in fields(cls):
            raw = row[fld.name]
            exact = row.get(fld.name + "_exact", "")
            if fld.name in ("N", "h", "Q", "bound_main"):
                kw[fld.name] = int(raw)
            elif fld.name == "preset":
                kw[fld.name] = raw
            elif fld.name == "seed":
                kw[fld.name] = int(raw) if raw else None
            elif exact:
                kw[fld.name] = Fraction(exact)
            else:
                kw[fld.name] = float(raw)
        return cls(**kw)


def run_cell(cell: Cell) -> ExperimentRecord:
    """Compute every quantity of one grid cell from a fresh sieve."""
    g = make_g(cell.preset, cell.Q, cell.seed, cell.bound)
    N, h, Q, mode = cell.N, cell.h, cell.Q, cell.mode
    f = experiment_table(g, N, h)
    table = build_correlation_table(f, N, 3 * h, mode, split=False)
    l1 = check_lemma1(f, N, h, mode, table)
    l2 = check_lemma2(f, g, N, h, mode, table)
    thm = check_theorem_I_rep(f, N, h, mode, table)
    scale = N * h * h
    return ExperimentRecord(
        N=N,
        h=h,
        Q=Q,
        theta_eff=math.log(h) / math.log(N),
        lambda_eff=math.log(Q) / math.log(N),
        preset=cell.preset,
        seed=cell.seed,
        J=l2.lhs,
        I=l1.lhs,
        rep_L2=l2.rhs_main,
        rep_L1=l1.rhs_main,
        resid_L1=l1.ratio,
        resid_L2=l2.ratio,
        resid_THM=thm.ratio,
        bound_main=N * h + h**3 + Q * Q * h + Q * h * h,
        ratio_J=float(l2.lhs / scale),
        ratio_I=float(l1.lhs / scale),
    )


def worker_count(requested: int | None = None) -> int:
    """Explicit request, else ``SIEVELAB_THREADS``, else 1."""
    if requested is not None:
        if requested < 1:
            raise SieveError("worker count must be positive")
        return requested
    env = os.environ.get("SIEVELAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise SieveError(f"SIEVELAB_THREADS must be a positive integer, got {env!r}")
        if n < 1:
            raise SieveError(f"SIEVELAB_THREADS must be a positive integer, got {env!r}")
        return n
    return 1


def run_cells(cells: Sequence[Cell], workers: int | None = None) -> list[ExperimentRecord]:
    """Evaluate independent cells, in input order whatever the completion order."""
    n = min(worker_count(workers), max(len(cells), 1))
    if n == 1:
        return [run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(run_cell, cells))


def run_grid(
    config: GridConfig, out_path: str | Path | None = None, workers: int | None = None
) -> list[ExperimentRecord]:
    records = sorted(run_cells(config.cells(), workers), key=lambda r: r.N)
    if out_path is not None:
        write_csv(records, out_path)
    return records


def write_csv(records: Iterable[ExperimentRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS + EXACT_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow(r.as_row())


def read_csv(path: str | Path) -> list[ExperimentRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ())[: len(CSV_COLUMNS)] != CSV_COLUMNS:
            raise SieveError(f"{path}: unexpected CSV header {reader.fieldnames}")
        return [ExperimentRecord.from_row(row) for row in reader]


def inversions(values: Sequence[float]) -> int:
    """Number of consecutive increases in a sequence meant to be non-increasing."""
    return sum(1 for a, b in zip(values, values[1:]) if b > a)


def record_dict(r: ExperimentRecord) -> dict:
    return asdict(r)
