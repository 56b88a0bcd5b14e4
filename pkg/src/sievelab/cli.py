"""Command-line entry point.

Exit codes: 0 success, 1 internal error or failed self-check, 2 usage,
3 validation.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import _backend
from .arith import SieveError, ScaleParams, experiment_table, make_g, mean_value, sieve_f
from .correlations import build_correlation_table
from .integrals import selberg_integral, symmetry_integral
from .verify import (
    GridConfig,
    check_lemma1,
    check_lemma2,
    check_theorem_I_rep,
    inversions,
    read_csv,
    run_grid,
)

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2, 3

COMMANDS = (
    "sieve", "kernels-selfcheck", "integrals", "correlate", "verify", "experiment", "report",
)
LEMMA_CHOICES = ("lemma1", "lemma2", "theorem", "all")

# canonical key -> parser
_INT_KEYS = ("N", "h", "Q", "seed", "bound", "lo", "hi", "a_max", "workers", "samples")
_DEC_KEYS = ("theta", "lambda", "tol")
_STR_KEYS = ("preset", "mode", "out_path", "in_path", "lemma", "n_list")
KEYS = _INT_KEYS + _DEC_KEYS + _STR_KEYS
_ALIASES = {k.lower(): k for k in KEYS} | {"out": "out_path", "in": "in_path", "n-list": "n_list"}
DEFAULTS = {"mode": "exact", "tol": 1e-9}


class UsageError(Exception):
    pass


class ValidationError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.params[key]

    def get(self, key, default=None):
        return self.params.get(key, default)

    def require(self, *keys):
        missing = [k for k in keys if self.params.get(k) is None]
        if missing:
            raise ValidationError(f"{self.command}: missing required key(s): {', '.join(missing)}")


def _canonical(key: str) -> str:
    k = _ALIASES.get(key.strip().lower())
    if k is None:
        raise UsageError(f"unknown key {key!r}")
    return k


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _DEC_KEYS:
            # decimals are parsed exactly first so junk like "nan" is rejected
            return float(Fraction(raw))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"{key}: cannot parse {raw!r} as a number")
    if key == "n_list":
        try:
            return tuple(int(x) for x in raw.replace(",", " ").split())
        except ValueError:
            raise ValidationError(f"n_list: cannot parse {raw!r}")
    return raw


def read_config_file(path: str | Path) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        if key.strip().lower() == "command":
            out["command"] = value.strip()
            continue
        k = _canonical(key)
        out[k] = _parse_value(k, value)
    return out


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--n", "--N", dest="N")
    p.add_argument("--h", dest="h")
    p.add_argument("--q", "--Q", dest="Q")
    p.add_argument("--preset", choices=("delta1", "ones", "moebius", "random_bounded"))
    p.add_argument("--seed")
    p.add_argument("--bound")
    p.add_argument("--theta")
    p.add_argument("--lambda", dest="lambda")
    p.add_argument("--n-list", dest="n_list", help="comma separated, ascending")
    p.add_argument("--mode", choices=("exact", "float"))
    p.add_argument("--out", dest="out_path")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--tol")
    p.add_argument("--lo")
    p.add_argument("--hi")
    p.add_argument("--a-max", dest="a_max")
    p.add_argument("--workers")
    p.add_argument("--samples", help="quadrature samples per unit for integrals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sievelab",
        description="Sieve functions, short-interval integrals and correlations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "verify":
            sp.add_argument("lemma", choices=LEMMA_CHOICES, nargs="?", default="all")
        _add_param_flags(sp)
    kp = sub.add_parser("kernels", help="kernel utilities (`kernels selfcheck`)")
    kp.add_argument("action", choices=("selfcheck",))
    _add_param_flags(kp)
    return parser


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        raise UsageError("bad command line") if exc.code else exc
    command = "kernels-selfcheck" if ns.command == "kernels" else ns.command

    params = dict(DEFAULTS)
    if ns.config:
        file_params = read_config_file(ns.config)
        file_cmd = file_params.pop("command", None)
        if file_cmd is not None and file_cmd != command:
            raise UsageError(f"config file is for {file_cmd!r}, not {command!r}")
        params.update(file_params)
    for key in KEYS:
        raw = getattr(ns, key, None)
        if raw is not None:
            params[key] = _parse_value(key, raw)
    if command == "verify":
        params["lemma"] = ns.lemma
    cfg = RunConfig(command, params)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    p = cfg.params
    if p.get("mode") not in ("exact", "float"):
        raise ValidationError(f"mode must be exact or float, got {p.get('mode')!r}")
    for k in ("N", "h", "Q", "a_max", "workers", "samples", "lo", "hi"):
        if p.get(k) is not None and p[k] < 1:
            raise ValidationError(f"{k} must be >= 1, got {p[k]}")
    if p.get("tol") is not None and not p["tol"] > 0:
        raise ValidationError("tol must be positive")
    lam, theta = p.get("lambda"), p.get("theta")
    if lam is not None and not (0 <= lam < 1):
        raise ValidationError(f"lambda must lie in [0, 1), got {lam}")
    if theta is not None and not (0 < theta < 1):
        raise ValidationError(f"theta must lie in (0, 1), got {theta}")
    if p.get("preset") == "delta1" and p.get("Q") is None:
        p["Q"] = 1
    if p.get("preset") == "random_bounded" and p.get("seed") is None and cfg.command != "report":
        raise ValidationError("random_bounded needs a seed")
    if p.get("preset") not in (None, "random_bounded") and p.get("seed") is not None:
        raise ValidationError("seed only applies to random_bounded")

    if cfg.command in ("integrals", "verify"):
        cfg.require("N", "h", "Q", "preset")
        try:
            ScaleParams(p["N"], p["h"], p["Q"])
        except SieveError as exc:
            raise ValidationError(str(exc))
    elif cfg.command == "correlate":
        cfg.require("N", "Q", "preset")
        if p.get("a_max") is None and p.get("h") is None:
            raise ValidationError("correlate needs a_max or h")
    elif cfg.command == "sieve":
        cfg.require("Q", "preset")
        if p.get("hi") is None and p.get("N") is None:
            raise ValidationError("sieve needs hi or N")
    elif cfg.command == "experiment":
        cfg.require("theta", "lambda", "preset", "n_list")
        try:
            GridConfig(theta, lam, p["preset"], p["n_list"], p.get("seed"), p.get("bound"), p["mode"])
        except SieveError as exc:
            raise ValidationError(str(exc))
    elif cfg.command == "report":
        cfg.require("in_path")


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{float(v):.12g} ({v.numerator}/{v.denominator})"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _g(cfg: RunConfig):
    return make_g(cfg["preset"], cfg["Q"], cfg.get("seed"), cfg.get("bound"))


PLOT_TEMPLATE = '''\
#!/usr/bin/env python3
"""Log-log plot of ratio_J and ratio_I against N.

Generated by sievelab; reads {csv_name} from this script's directory.
"""
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
with open(here / {csv_name!r}, newline="", encoding="utf-8") as fh:
    rows = list(csv.DictReader(fh))

N = [int(r["N"]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4))
for column, marker in (("ratio_J", "o"), ("ratio_I", "s")):
    ax.loglog(N, [float(r[column]) for r in rows], marker=marker, label=column)
ax.set_xlabel("N")
ax.set_ylabel("integral / (N h^2)")
ax.set_title({title!r})
ax.legend()
fig.tight_layout()
fig.savefig(here / {png_name!r}, dpi=120)
'''


def emit_plot_script(records, out_path: str | Path, csv_name: str | None = None) -> Path:
    """Write a standalone matplotlib script plotting ``ratio_J`` and ``ratio_I``.

    The script locates the CSV relative to itself; the same records always
    produce the same bytes.
    """
    records = list(records)
    if len(records) < 2:
        raise ValidationError("a plot needs at least two records")
    out_path = Path(out_path)
    csv_name = csv_name or out_path.with_suffix(".csv").name
    first = records[0]
    title = (
        f"{first.preset}: N={records[0].N}..{records[-1].N}, "
        f"theta~{first.theta_eff:.3f}, lambda~{first.lambda_eff:.3f}"
    )
    text = PLOT_TEMPLATE.format(
        csv_name=csv_name, png_name=Path(csv_name).with_suffix(".png").name, title=title
    )
    out_path.write_text(text, encoding="utf-8")
    return out_path


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_sieve(cfg: RunConfig, out) -> int:
    g = _g(cfg)
    if cfg.get("hi") is not None:
        lo, hi = cfg.get("lo") or 1, cfg["hi"]
    else:
        lo, hi = 1, 2 * cfg["N"] + 4 * (cfg.get("h") or 0)
    try:
        f = sieve_f(g, lo, hi)
    except SieveError as exc:
        raise ValidationError(str(exc))
    dest = cfg.get("out_path")
    if dest:
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "f", "f_exact"])
            for n, v in zip(range(lo, hi + 1), f.exact_values()):
                w.writerow([n, repr(float(v)), f"{v.numerator}/{v.denominator}"])
        print(f"wrote {hi - lo + 1} values to {dest}", file=out)
    else:
        for n, v in zip(range(lo, hi + 1), f.exact_values()):
            print(f"{n}\t{_fmt(v)}", file=out)
    print(f"sup_norm\t{_fmt(f.sup_norm)}", file=out)
    return EXIT_OK


def cmd_kernels_selfcheck(cfg: RunConfig, out) -> int:
    from .selfcheck import run_selfcheck

    results = run_selfcheck(h_max=cfg.get("h") or 20, tol=cfg.get("tol", 1e-9))
    ok = True
    for name, passed, detail in results:
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}", file=out)
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_integrals(cfg: RunConfig, out) -> int:
    g = _g(cfg)
    N, h, mode = cfg["N"], cfg["h"], cfg["mode"]
    f = experiment_table(g, N, h)
    M = mean_value(g, h)
    J = selberg_integral(f, N, h, M, mode)
    I = symmetry_integral(f, N, h, mode)
    print(f"N={N} h={h} Q={g.Q} preset={g.preset_tag} mode={mode} backend={_backend.backend_name()}", file=out)
    print(f"M_f(2h)\t{_fmt(M)}", file=out)
    print(f"J\t{_fmt(J.value)}", file=out)
    print(f"I\t{_fmt(I.value)}", file=out)
    print(f"J/(N h^2)\t{float(J.value) / (N * h * h):.6g}", file=out)
    print(f"I/(N h^2)\t{float(I.value) / (N * h * h):.6g}", file=out)
    if J.large_support:
        print("warning: Q > N, outside the regime where M_f(2h) is the natural mean", file=out)
    return EXIT_OK


def cmd_correlate(cfg: RunConfig, out) -> int:
    g = _g(cfg)
    N, mode = cfg["N"], cfg["mode"]
    a_max = cfg.get("a_max") or 3 * cfg["h"]
    f = sieve_f(g, max(1, N + 1 - a_max), 2 * N + a_max)
    table = build_correlation_table(f, N, a_max, mode, split=(mode == "exact"))
    rows = []
    for a in range(-a_max, a_max + 1):
        main = table.main.get(a)
        rem = table.remainder.get(a)
        rows.append((a, table.direct[a], main, rem))
    dest = cfg.get("out_path")
    if dest:
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["a", "direct", "main", "remainder", "direct_exact", "main_exact", "remainder_exact"])
            for a, d, m, r in rows:
                cells = [d, m, r]
                w.writerow(
                    [a]
                    + ["" if v is None else repr(float(v)) for v in cells]
                    + [f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else "" for v in cells]
                )
        print(f"wrote {len(rows)} lags to {dest}", file=out)
    else:
        print("a\tC_f(a)\tmain\tremainder", file=out)
        for a, d, m, r in rows:
            print(f"{a}\t{_fmt(d)}\t{'' if m is None else _fmt(m)}\t{'' if r is None else _fmt(r)}", file=out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out) -> int:
    g = _g(cfg)
    N, h, mode = cfg["N"], cfg["h"], cfg["mode"]
    f = experiment_table(g, N, h)
    table = build_correlation_table(f, N, 3 * h, mode, split=False)
    which = cfg["lemma"]
    reports = []
    if which in ("lemma1", "all"):
        reports.append(check_lemma1(f, N, h, mode, table))
    if which in ("lemma2", "all"):
        reports.append(check_lemma2(f, g, N, h, mode, table))
    if which in ("theorem", "all"):
        reports.append(check_theorem_I_rep(f, N, h, mode, table))
    for r in reports:
        print(
            f"{r.lemma}: lhs={_fmt(r.lhs)} rhs_main={_fmt(r.rhs_main)} "
            f"residual={_fmt(r.residual)} normalizer={_fmt(r.normalizer)} ratio={r.ratio:.6g}",
            file=out,
        )
    return EXIT_OK


def _print_records(records, out) -> None:
    print("N\th\tQ\tratio_J\tratio_I\tresid_L1\tresid_L2\tresid_THM", file=out)
    for r in records:
        print(
            f"{r.N}\t{r.h}\t{r.Q}\t{r.ratio_J:.6g}\t{r.ratio_I:.6g}\t"
            f"{r.resid_L1:.4g}\t{r.resid_L2:.4g}\t{r.resid_THM:.4g}",
            file=out,
        )
    if len(records) > 1:
        print(
            f"inversions: ratio_J={inversions([r.ratio_J for r in records])} "
            f"ratio_I={inversions([r.ratio_I for r in records])}",
            file=out,
        )


def cmd_experiment(cfg: RunConfig, out) -> int:
    p = cfg.params
    grid = GridConfig(p["theta"], p["lambda"], p["preset"], p["n_list"], p.get("seed"), p.get("bound"), p["mode"])
    dest = Path(p.get("out_path") or "experiment.csv")
    dest.parent.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    records = run_grid(grid, dest, p.get("workers"))
    _print_records(records, out)
    if not grid.in_corollary_region:
        print("note: lambda >= (1 + theta)/2; no decay is expected, records only", file=out)
    print(f"wrote {dest} in {time.perf_counter() - t0:.1f}s", file=out)
    if len(records) >= 2:
        script = emit_plot_script(records, dest.with_suffix(".plot.py"), dest.name)
        print(f"wrote {script}", file=out)
    return EXIT_OK


def cmd_report(cfg: RunConfig, out) -> int:
    try:
        records = read_csv(cfg["in_path"])
    except (OSError, KeyError, ValueError) as exc:
        raise ValidationError(f"cannot read {cfg['in_path']}: {exc}")
    _print_records(records, out)
    if cfg.get("out_path"):
        script = emit_plot_script(records, cfg["out_path"], os.path.relpath(cfg["in_path"], Path(cfg["out_path"]).resolve().parent))
        print(f"wrote {script}", file=out)
    return EXIT_OK


HANDLERS = {
    "sieve": cmd_sieve,
    "kernels-selfcheck": cmd_kernels_selfcheck,
    "integrals": cmd_integrals,
    "correlate": cmd_correlate,
    "verify": cmd_verify,
    "experiment": cmd_experiment,
    "report": cmd_report,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = parse_config(argv)
        return HANDLERS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, SieveError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - mapped to the internal-error exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
