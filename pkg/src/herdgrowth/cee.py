"""Calibrated catch-up parameters for eleven Central and Eastern European economies.

Two sets, fitted to OECD TFP (USD per hour worked, PPP) with the time origin
at 1995: one against a Germany frontier, one against a US frontier. Each row
holds ``(a0, stderr_a0, gamma, stderr_gamma, a_2030, a_2050)``; rows are in
the reference order (descending gamma).
"""
from __future__ import annotations

import numpy as np

from .calibration import TimeOrigin
from .lm import FitResult
from .model import FrontierParams

T0_YEAR = 1995
ORIGIN = TimeOrigin(T0_YEAR)

GERMANY_FRONTIER = FrontierParams(28.7205, 0.0381261)
US_FRONTIER = FrontierParams(39.908, 0.0354031)

VS_GERMANY = {
    "Romania": (3.25365, 0.314761, 0.148995, 0.00464697, 72.7955, 171.836),
    "Lithuania": (7.58554, 0.336468, 0.136149, 0.00267282, 74.3754, 167.028),
    "Estonia": (7.11872, 0.353558, 0.130107, 0.00286485, 71.7945, 163.379),
    "Slovakia": (11.239, 0.631024, 0.120902, 0.00390888, 71.7115, 158.83),
    "Czechia": (12.6282, 0.410532, 0.119671, 0.00241689, 72.0422, 158.344),
    "Slovenia": (14.9978, 0.650397, 0.116691, 0.00358649, 72.1028, 156.821),
    "Latvia": (6.49365, 0.200544, 0.115141, 0.00167061, 64.438, 152.087),
    "Poland": (9.14255, 0.265604, 0.110311, 0.00177447, 65.8209, 150.017),
    "Hungary": (10.8251, 0.483776, 0.0965172, 0.00288759, 61.1909, 138.089),
    "Bulgaria": (5.69932, 0.382148, 0.0942085, 0.00344184, 50.6926, 127.524),
    "Croatia": (10.7837, 0.357209, 0.0863183, 0.00211604, 55.861, 126.203),
}

VS_US = {
    "Romania": (3.77933, 0.276553, 0.125784, 0.00334579, 77.4339, 192.199),
    "Lithuania": (8.37812, 0.30658, 0.105743, 0.00196187, 77.3495, 177.999),
    "Estonia": (7.78863, 0.329619, 0.103664, 0.00221673, 74.5066, 174.483),
    "Latvia": (6.90862, 0.195649, 0.0963823, 0.00143334, 66.335, 161.941),
    "Slovakia": (11.8308, 0.585946, 0.0907588, 0.00295312, 72.9275, 162.422),
    "Poland": (9.50355, 0.226165, 0.089073, 0.00131183, 67.2848, 156.059),
    "Czechia": (12.9852, 0.334397, 0.0888178, 0.00159386, 73.2775, 160.98),
    "Bulgaria": (5.80356, 0.34917, 0.0841821, 0.00294871, 51.8, 134.609),
    "Slovenia": (15.1175, 0.55593, 0.0839232, 0.00358649, 72.6617, 156.019),
    "Hungary": (11.039, 0.452043, 0.0779928, 0.00237168, 61.702, 139.667),
    "Croatia": (10.8943, 0.336535, 0.0714743, 0.00178679, 56.0708, 126.407),
}


def as_fits(rows: dict, frontier: FrontierParams) -> list[tuple[str, FitResult]]:
    """Wrap a parameter set as fit results (covariance from the stderrs only)."""
    out = []
    for country, (a0, se_a0, gamma, se_gamma, _, _) in rows.items():
        out.append(
            (
                country,
                FitResult(
                    params={"a0": a0, "gamma": gamma},
                    stderr={"a0": se_a0, "gamma": se_gamma},
                    covariance=np.diag([se_a0**2, se_gamma**2]),
                    ssr=float("nan"),
                    n_obs=0,
                    iterations=0,
                    converged=True,
                    country=country,
                    t0_year=T0_YEAR,
                    frontier=frontier,
                ),
            )
        )
    return out
