"""Closed-form TFP trajectories and adoption dynamics.

Every evaluator takes a scalar or array of times (in years) and returns a
float for scalar input, an ndarray otherwise. Parameter containers are
frozen dataclasses that validate themselves on construction.

Two growth models are covered:

* a fixed technological frontier ``a_m``, where TFP follows a logistic path
  from ``a0`` up to ``a_m``;
* an exponentially moving frontier ``a_m0 * exp(gamma_m * t)``, where TFP
  follows logistic growth toward a carrying capacity that itself grows.

Both are driven by the share ``s(t)`` of innovators who have not yet adopted
frontier technology, itself the solution of a one-directional herding
process with idiosyncratic rate ``sigma`` and imitation rate ``h``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# |gamma - gamma_m| at or below this multiple of gamma uses the analytic
# limit of the moving-frontier solution (the closed form is 0/0 there).
DEGENERATE_RTOL = 1e-9


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


def _nonnegative(name, value):
    if not (value >= 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be non-negative and finite, got {value!r}")


@dataclass(frozen=True)
class AdoptionParams:
    """Mean-field adoption rates: idiosyncratic ``sigma`` and herding ``h``."""

    sigma: float
    h: float

    def __post_init__(self):
        _nonnegative("sigma", self.sigma)
        _nonnegative("h", self.h)


@dataclass(frozen=True)
class FixedFrontierParams:
    """Catch-up toward a constant frontier level ``a_m``.

    ``h`` is the convergence-speed parameter of the aggregate path. It is a
    rescaled quantity and not the microscopic herding rate of
    :class:`AdoptionParams`.
    """

    a0: float
    a_m: float
    h: float

    def __post_init__(self):
        _positive("a0", self.a0)
        _positive("a_m", self.a_m)
        _positive("h", self.h)
        if self.a0 > self.a_m:
            raise DomainError(f"a0={self.a0} exceeds the frontier level a_m={self.a_m}")


@dataclass(frozen=True)
class FrontierParams:
    """Exponential frontier ``a_m0 * exp(gamma_m * t)``."""

    a_m0: float
    gamma_m: float

    def __post_init__(self):
        _positive("a_m0", self.a_m0)
        if not math.isfinite(self.gamma_m):
            raise DomainError(f"gamma_m must be finite, got {self.gamma_m!r}")


@dataclass(frozen=True)
class CatchUpParams:
    """Per-country parameters of the moving-frontier model."""

    a0: float
    gamma: float

    def __post_init__(self):
        _positive("a0", self.a0)
        _positive("gamma", self.gamma)


@dataclass(frozen=True)
class KremerParams:
    """Baseline growth driven by a constant number of innovators ``n``."""

    a0: float
    gamma: float
    n: float

    def __post_init__(self):
        _positive("a0", self.a0)
        _positive("gamma", self.gamma)
        _positive("n", self.n)


def catches_up(f: FrontierParams, c: CatchUpParams) -> bool:
    """True when the country closes a fixed share of the gap in the long run."""
    return c.gamma > f.gamma_m


def _times(t, allow_negative=False):
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("time must be finite")
    if not allow_negative and np.any(arr < 0):
        raise DomainError("time must be >= 0")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def eval_s(p: AdoptionParams, t):
    """Share of innovators that have not adopted by time ``t``, with s(0)=1.

    Evaluated as ``k e^{-kt} / (h e^{-kt} + sigma)`` with ``k = sigma + h``,
    which is algebraically the usual form but never overflows.
    """
    k = p.sigma + p.h
    if k <= 0:
        raise DomainError("sigma + h must be positive")
    tt = _times(t)
    if p.sigma == 0:
        return _out(np.ones_like(tt), t)
    e = np.exp(-k * tt)
    return _out(k * e / (p.h * e + p.sigma), t)


def eval_x(p: AdoptionParams, t):
    """Adopter share ``1 - s(t)``."""
    return _out(1.0 - np.asarray(eval_s(p, t)), t)


def eval_a_fixed(p: FixedFrontierParams, t):
    """TFP under a fixed frontier; rises from ``a0`` toward ``a_m``."""
    tt = _times(t)
    if p.a0 == p.a_m:
        return _out(np.full_like(tt, p.a0), t)
    rate = p.a_m * p.h / (p.a_m - p.a0)
    # a_m a0 / (a_m e + a0 (1 - e)) rearranged; this form is monotone in floats
    a = p.a_m / (1.0 + (p.a_m / p.a0 - 1.0) * np.exp(-rate * tt))
    return _out(np.where(tt == 0, p.a0, a), t)


def eval_frontier(f: FrontierParams, t):
    """Frontier TFP level; ``t`` may be negative."""
    tt = _times(t, allow_negative=True)
    return _out(f.a_m0 * np.exp(f.gamma_m * tt), t)


def moving_frontier_core(a_m0, gamma_m, a0, gamma, t):
    """Unchecked moving-frontier solution, vectorised over ``t``.

    Returns NaN wherever the denominator has the wrong sign, which happens
    only for parameters outside the model's domain. Calibration calls this
    directly so trial steps into invalid territory are rejected rather than
    raised.
    """
    t = np.asarray(t, dtype=float)
    d = gamma - gamma_m
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        if abs(d) <= DEGENERATE_RTOL * abs(gamma):
            # limit gamma -> gamma_m: a_m0 e^{gamma t} / (gamma t + a_m0/a0)
            den = 1.0 + a0 * gamma * t / a_m0
            a = a0 * np.exp(gamma * t - np.log(np.where(den > 0, den, np.nan)))
        elif d > 0:
            # scaled by (a0/a_m0) e^{-dt} so nothing overflows for large t
            den = -(a0 / a_m0) * gamma * np.expm1(-d * t) + d * np.exp(-d * t)
            a = a0 * np.exp(gamma_m * t) * d / den
            a = np.where(den > 0, a, np.nan)
        else:
            den = (a0 / a_m0) * gamma * np.expm1(d * t) + d
            a = a0 * np.exp(gamma * t) * d / den
            a = np.where(den < 0, a, np.nan)
    return np.where(t == 0, a0, a)


def eval_a_moving(f: FrontierParams, c: CatchUpParams, t):
    """TFP under the moving frontier ``a_m0 * exp(gamma_m * t)``."""
    tt = _times(t)
    a = moving_frontier_core(f.a_m0, f.gamma_m, c.a0, c.gamma, tt)
    if not np.all(np.isfinite(a)):
        raise DomainError(f"moving-frontier solution undefined for {f}, {c}")
    return _out(a, t)


def growth_rate_moving(f: FrontierParams, c: CatchUpParams, t):
    """Instantaneous growth rate ``gamma * (1 - A(t) / A_m(t))``."""
    ratio = np.asarray(eval_a_moving(f, c, t)) / np.asarray(eval_frontier(f, t))
    return _out(c.gamma * (1.0 - ratio), t)


def asymptotic_frontier_ratio(gamma: float, gamma_m: float) -> float:
    """Long-run share of the frontier reached, ``1 - gamma_m / gamma``."""
    if not (gamma > gamma_m > 0):
        raise DomainError(f"need gamma > gamma_m > 0, got gamma={gamma}, gamma_m={gamma_m}")
    return 1.0 - gamma_m / gamma


def kremer_tfp(k: KremerParams, t):
    tt = _times(t)
    return _out(k.a0 * np.exp(k.gamma * k.n * tt), t)


def rhs_adoption(p: AdoptionParams, x: float) -> float:
    """Mean-field adoption speed ``(1 - x)(sigma + h x)``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"adopter share must lie in [0, 1], got {x!r}")
    return (1.0 - x) * (p.sigma + p.h * x)


def rhs_logistic_moving(f: FrontierParams, gamma: float, a: float, t: float) -> float:
    """Logistic growth toward the moving frontier, ``dA/dt``."""
    if not a > 0:
        raise DomainError(f"TFP level must be positive, got {a!r}")
    return gamma * a * (1.0 - a / (f.a_m0 * math.exp(f.gamma_m * t)))
