"""Regenerate the synthetic fixtures in this directory.

    python data/make_fixtures.py

SYN-DE follows the Germany frontier exactly; the SYN-* countries follow the
moving-frontier solution against it. The noisy file multiplies every value
by (1 + 0.02 * N(0, 1)) with seed 2026.
"""
import json
from pathlib import Path

import numpy as np

from herdgrowth import cee
from herdgrowth.calibration import TfpSeries, dumps_fits, fits_document
from herdgrowth.dataio import CurveSpec, Dataset, fixed_frontier_family, write_tfp_csv
from herdgrowth.model import CatchUpParams, eval_a_moving, eval_frontier

HERE = Path(__file__).parent
YEARS = np.arange(1995, 2025)
GERMANY = cee.GERMANY_FRONTIER
COUNTRIES = {
    "SYN-A": CatchUpParams(5.0, 0.12),
    "SYN-RO": CatchUpParams(3.25365, 0.148995),
    "SYN-HR": CatchUpParams(10.7837, 0.0863183),
}


def panel(noise=0.0, seed=2026):
    rng = np.random.default_rng(seed)
    t = (YEARS - cee.T0_YEAR).astype(float)

    def jitter(v):
        return v * (1 + noise * rng.standard_normal(v.size)) if noise else v

    series = [TfpSeries("SYN-DE", YEARS, jitter(eval_frontier(GERMANY, t)))]
    for name, c in COUNTRIES.items():
        series.append(TfpSeries(name, YEARS, jitter(eval_a_moving(GERMANY, c, t))))
    return Dataset(series)


def curve_doc(specs, t0):
    return json.dumps({"t0_year": t0, "curves": [{"name": s.name, "kind": s.kind, **s.params} for s in specs]}, indent=2) + "\n"


def main():
    (HERE / "synthetic_noiseless.csv").write_bytes(write_tfp_csv(panel()))
    (HERE / "synthetic_noise2pct.csv").write_bytes(write_tfp_csv(panel(noise=0.02)))
    (HERE / "curves_fixed_family.json").write_text(curve_doc(fixed_frontier_family(), 0))
    ro = cee.VS_GERMANY["Romania"]
    (HERE / "curves_romania.json").write_text(
        curve_doc(
            [
                CurveSpec("Germany frontier", "frontier", {"a_m0": GERMANY.a_m0, "gamma_m": GERMANY.gamma_m}),
                CurveSpec(
                    "Romania",
                    "moving",
                    {"a_m0": GERMANY.a_m0, "gamma_m": GERMANY.gamma_m, "a0": ro[0], "gamma": ro[2]},
                ),
            ],
            cee.T0_YEAR,
        )
    )
    for name, rows, frontier in (("germany", cee.VS_GERMANY, GERMANY), ("us", cee.VS_US, cee.US_FRONTIER)):
        fits = [f for _, f in cee.as_fits(rows, frontier)]
        (HERE / f"fits_cee_vs_{name}.json").write_text(dumps_fits(fits_document(None, fits, name)))


if __name__ == "__main__":
    main()
