"""Fixed-step classical Runge-Kutta integration for scalar ODEs.

Used as an independent check on the closed-form solutions in
:mod:`herdgrowth.model`; nothing here knows about those formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError


@dataclass(frozen=True)
class OdeProblem:
    """``dy/dt = rhs(t, y)`` with ``y(t_span[0]) = y0``."""

    rhs: Callable[[float, float], float]
    y0: float
    t_span: tuple[float, float]

    def __post_init__(self):
        t0, t1 = self.t_span
        if not (math.isfinite(t0) and math.isfinite(t1)) or t1 < t0:
            raise DomainError(f"t_span must be an ordered finite pair, got {self.t_span!r}")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values differ in length")

    @property
    def final(self) -> float:
        return float(self.values[-1])


def _grid(t0, t1, step):
    n_full = int(math.floor((t1 - t0) / step))
    times = t0 + step * np.arange(n_full + 1)
    # drop a last uniform point that only misses t1 by rounding
    if t1 - times[-1] <= 1e-9 * step:
        times = times[:-1]
    return np.append(times, t1)


def integrate_rk4(p: OdeProblem, step: float) -> Trajectory:
    """Integrate with uniform ``step``; the final step is shortened to hit t_end.

    Grid points are ``t_start + k * step`` (not accumulated sums), so the
    coarse grid of ``step`` is a subset of the grid of ``step / 2``.
    """
    if not (step > 0 and math.isfinite(step)):
        raise DomainError(f"step must be positive, got {step!r}")
    t0, t1 = p.t_span
    if t0 == t1:
        return Trajectory(np.array([t0]), np.array([float(p.y0)]))
    if step > t1 - t0:
        raise DomainError(f"step {step} exceeds span length {t1 - t0}")

    times = _grid(t0, t1, step)
    values = np.empty_like(times)
    f = p.rhs
    y = float(p.y0)
    values[0] = y
    for i in range(len(times) - 1):
        t = times[i]
        dt = times[i + 1] - t
        k1 = f(t, y)
        k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = f(t + dt, y + dt * k3)
        y = y + dt * (k1 + 2.0 * (k2 + k3) + k4) / 6.0
        if not math.isfinite(y):
            raise NumericError(f"non-finite state at t={times[i + 1]}")
        values[i + 1] = y
    return Trajectory(times, values)


def richardson_error_estimate(p: OdeProblem, step: float) -> float:
    """Max-norm gap between the ``step`` and ``step/2`` solutions on the coarse grid."""
    coarse = integrate_rk4(p, step)
    fine = integrate_rk4(p, step / 2)
    # coarse interior point k sits at fine index 2k; both end at t_end
    n = len(coarse.times) - 1
    gap = np.abs(coarse.values[:n] - fine.values[0 : 2 * n : 2])
    gap = np.append(gap, abs(coarse.values[-1] - fine.values[-1]))
    return float(gap.max())
