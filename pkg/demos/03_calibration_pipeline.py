"""
Calibrating catch-up speeds
===========================

Fit the frontier first, then each follower's (a0, gamma) with the frontier
held fixed. The input here is the bundled synthetic panel with 2% noise.
Swap in a real ``country,year,value`` extract to do the same on data.
"""
from pathlib import Path

from herdgrowth import cee
from herdgrowth.calibration import TimeOrigin, fit_all, frontier_params, rank_by_gamma, standard_errors
from herdgrowth.dataio import parse_tfp_csv, projection_table, write_projection_table

data_file = Path(__file__).resolve().parent.parent / "data" / "synthetic_noise2pct.csv"
dataset = parse_tfp_csv(data_file.read_bytes())
print("countries:", ", ".join(dataset))

frontier_fit, fits = fit_all(dataset, "SYN-DE", ["SYN-A", "SYN-RO", "SYN-HR"], TimeOrigin(1995))
f = frontier_params(frontier_fit)
print(f"\nfrontier: a_m0={f.a_m0:.3f}  gamma_m={f.gamma_m:.5f}  (generated with 28.7205, 0.0381261)")

truth = {"SYN-A": (5.0, 0.12), "SYN-RO": (3.25365, 0.148995), "SYN-HR": (10.7837, 0.0863183)}
for country, fit in rank_by_gamma((fit.country, fit) for fit in fits):
    se = standard_errors(fit)
    a0, gamma = fit.params["a0"], fit.params["gamma"]
    print(
        f"{country:7s} a0={a0:7.3f} ({se['a0']:.3f})  gamma={gamma:.4f} ({se['gamma']:.4f})"
        f"  true {truth[country]}  iterations={fit.iterations}{'  ' + '; '.join(fit.flags) if fit.flags else ''}"
    )

print("\nprojection table:")
print(write_projection_table(projection_table(fits, (2030, 2050))).decode())

# The same table from the reference CEE parameters:
reference = projection_table([fit for _, fit in cee.as_fits(cee.VS_GERMANY, cee.GERMANY_FRONTIER)])
print(write_projection_table(reference).decode())
