"""
Closed-form catch-up curves
===========================

Herding among innovators turns technology adoption into a logistic process.
This script walks through the closed forms and checks one of them against
a plain Runge-Kutta integration.
"""
import numpy as np

from herdgrowth import cee
from herdgrowth.model import (
    AdoptionParams,
    CatchUpParams,
    FixedFrontierParams,
    asymptotic_frontier_ratio,
    eval_a_fixed,
    eval_a_moving,
    eval_frontier,
    eval_x,
    rhs_logistic_moving,
)
from herdgrowth.ode import OdeProblem, integrate_rk4

# Adoption share x(t) with innovation rate sigma and herding rate h.
# Stronger herding gives the S-shape.
t = np.array([0.0, 2.0, 5.0, 10.0, 20.0])
for h in (0.0, 0.5, 2.0):
    print(f"h={h:3.1f}  x(t) =", np.round(eval_x(AdoptionParams(0.1, h), t), 4))

# Against a fixed frontier, TFP rises from a0 toward a_m.
# A larger h means faster saturation.
print()
for h in (0.05, 0.2, 0.8):
    a = eval_a_fixed(FixedFrontierParams(1.0, 2.0, h), t)
    print(f"fixed frontier, h={h:4.2f}:", np.round(a, 4))

# A moving frontier grows exponentially. Romania, measured against Germany:
frontier = cee.GERMANY_FRONTIER
romania = CatchUpParams(3.25365, 0.148995)
years = np.array([1995, 2010, 2030, 2050])
ro = eval_a_moving(frontier, romania, years - 1995.0)
de = eval_frontier(frontier, years - 1995.0)
print()
for y, a, m in zip(years, ro, de):
    print(f"{y}: Romania {a:8.3f}   Germany {m:8.3f}   ratio {a / m:.3f}")
print("long-run ratio:", round(asymptotic_frontier_ratio(romania.gamma, frontier.gamma_m), 4))

# The closed form agrees with a direct RK4 solution of the logistic ODE.
traj = integrate_rk4(
    OdeProblem(lambda t, a: rhs_logistic_moving(frontier, romania.gamma, a, t), romania.a0, (0.0, 55.0)), 1e-2
)
closed = eval_a_moving(frontier, romania, traj.times)
print("\nmax relative gap RK4 vs closed form:", f"{np.max(np.abs(traj.values / closed - 1)):.1e}")
