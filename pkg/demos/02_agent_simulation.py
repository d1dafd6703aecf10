"""
Agents behind the curve
=======================

The smooth adoption curve is the large-n limit of a jump process in which
each non-adopter switches either spontaneously or by imitating adopters.
"""
import numpy as np

from herdgrowth.abm import (
    DiffusionParams,
    KirmanParams,
    ensemble_mean_on_grid,
    kirman_occupancy,
    log_tfp_on_grid,
    simulate_adoption,
    simulate_adoption_ensemble,
    stationary_oracle,
    total_variation,
)
from herdgrowth.model import AdoptionParams, eval_x

sigma, h = 0.05, 0.5
grid = np.arange(0.0, 30.01, 5.0)
exact = eval_x(AdoptionParams(sigma, h), grid)

# One small population is noisy
path = simulate_adoption(DiffusionParams(sigma, h, 50), 0, 30.0, seed=1)
print("n=50, one run:       ", np.round(path.state_at(grid) / 50, 3))

# and the ensemble mean closes in on the ODE as n grows.
for n in (50, 1000, 10_000):
    paths = simulate_adoption_ensemble(DiffusionParams(sigma, h, n), 0, 30.0, seed=7, runs=200)
    mean = ensemble_mean_on_grid(paths, grid)
    print(f"n={n:<6} 200-run mean:", np.round(mean, 3), f" sup gap {np.max(np.abs(mean - exact)):.4f}")
print("mean-field x(t):      ", np.round(exact, 3))

# Adoption drives TFP: the growth rate is gamma times the non-adopter share.
log_a = [log_tfp_on_grid(p, 0.05, 1.0, grid) for p in paths]
print("\nmean TFP along the n=10000 runs:", np.round(np.exp(np.mean(log_a, axis=0)), 3))

# With abandonment allowed the chain has a stationary law. Weak spontaneous
# switching against strong imitation makes it bimodal: the herd sits at
# one extreme, then flips.
p = KirmanParams(sigma1=0.1, sigma2=0.1, h=1.0, n=50)
occ = kirman_occupancy(p, 25, 1e5, seed=3)
oracle = stationary_oracle(p)
print("\nKirman n=50, time share near the extremes (X<=5 or X>=45):", round(occ[:6].sum() + occ[45:].sum(), 3))
print("total variation vs detailed-balance oracle:", round(total_variation(occ, oracle), 4))
