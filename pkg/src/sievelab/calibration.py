"""Frozen residual constants.

The lemma-level error terms come with unspecified implied constants. We
measure ``|residual| / normalizer`` once over a fixed grid, round the maxima
up, and store them in ``calibration.json``. Regression tests then require
that no cell ever exceeds its frozen constant.

Regenerate with ``python -m sievelab.calibration --write`` (deliberately not
run by the tests).
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
from importlib import resources
from pathlib import Path

from .arith import PRESETS
from .verify import Cell, ExperimentRecord, run_cells

GRID_N = (1000, 10000)
GRID_H = (5, 10, 20, 40)
GRID_Q = (5, 20, 50)
RANDOM_SEED = 1
RANDOM_BOUND = 1
# record field -> key in calibration.json
RATIO_FIELDS = {"resid_L1": "L1", "resid_L2": "L2", "resid_THM": "THM_I_REP"}
SIG_DIGITS = 4


def calibration_cells() -> list[Cell]:
    cells = []
    for preset, N, h, Q in itertools.product(PRESETS, GRID_N, GRID_H, GRID_Q):
        seed = RANDOM_SEED if preset == "random_bounded" else None
        bound = RANDOM_BOUND if preset == "random_bounded" else None
        cells.append(Cell(N, h, Q, preset, seed, bound, "exact"))
    return cells


def _round_up(x: float, digits: int = SIG_DIGITS) -> float:
    if x <= 0:
        return 0.0
    scale = 10 ** (digits - 1 - math.floor(math.log10(x)))
    return math.ceil(x * scale) / scale


def measure(records: list[ExperimentRecord]) -> dict[str, float]:
    return {key: max(getattr(r, fld) for r in records) for fld, key in RATIO_FIELDS.items()}


def frozen_constants() -> dict[str, float]:
    text = resources.files("sievelab").joinpath("calibration.json").read_text()
    return json.loads(text)["constants"]


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--write", action="store_true", help="overwrite calibration.json")
    p.add_argument("--workers", type=int, default=None)
    args = p.parse_args(argv)

    records = run_cells(calibration_cells(), args.workers)
    measured = measure(records)
    frozen = {k: _round_up(v) for k, v in measured.items()}
    for k in frozen:
        print(f"{k:10s} max ratio {measured[k]:.6g} -> frozen {frozen[k]}")
    if args.write:
        payload = {
            "grid": {
                "presets": list(PRESETS),
                "N": list(GRID_N),
                "h": list(GRID_H),
                "Q": list(GRID_Q),
                "random_seed": RANDOM_SEED,
                "random_bound": RANDOM_BOUND,
            },
            "measured": measured,
            "constants": frozen,
        }
        path = Path(__file__).with_name("calibration.json")
        path.write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
