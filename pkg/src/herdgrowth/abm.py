"""Exact event-driven simulation of the agent-level adoption processes.

Two continuous-time Markov chains on the adopter count ``X`` in ``0..n``:

* one-directional adoption (agents adopt, never abandon), a pure-birth chain
  with rate ``(n - X) * (sigma + h * X / n)``;
* Kirman's bidirectional herding chain with birth rate
  ``(n - X) * (sigma1 + h * X)`` and death rate ``X * (sigma2 + h * (n - X))``.

Both are simulated exactly (Gillespie): exponential waiting times drawn by
inverse CDF from uniforms on the open interval (0, 1). Continuous-time rates
relate to the per-agent transition rates ``pi(x)`` by ``rate = n**2 * pi(x)``,
so the small-``dt`` discrete scheme converges to these same chains.

Randomness
----------
Every simulation takes a :class:`Seed`. Run ``i`` of an ensemble with master
seed ``m`` draws from ``PCG64(SeedSequence(m, spawn_key=(i,)))``, the same
stream ``SeedSequence(m).spawn(...)[i]`` produces, so ensembles are
reproducible however the runs are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import DomainError
from .ode import Trajectory

_U53 = 1 << 53
_BLOCK = 1 << 18


@dataclass(frozen=True)
class Seed:
    """Master seed (unsigned 64-bit) plus an optional ensemble run index."""

    master: int
    run: int | None = None

    def __post_init__(self):
        if not 0 <= self.master < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.master}")
        if self.run is not None and self.run < 0:
            raise DomainError("run index must be non-negative")

    def for_run(self, run: int) -> "Seed":
        return Seed(self.master, run)

    def generator(self) -> np.random.Generator:
        key = () if self.run is None else (self.run,)
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.master, spawn_key=key)))


def _as_seed(seed) -> Seed:
    return seed if isinstance(seed, Seed) else Seed(int(seed))


def open_uniforms(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform variates on (0, 1): multiples of 2**-53, never 0 or 1."""
    return rng.integers(1, _U53, size=size, dtype=np.int64) * (1.0 / _U53)


@dataclass(frozen=True)
class DiffusionParams:
    """One-directional adoption among ``n`` agents."""

    sigma: float
    h: float
    n: int

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not (self.sigma >= 0 and self.h >= 0) or self.sigma + self.h <= 0:
            raise DomainError("need sigma, h >= 0 with sigma + h > 0")

    def rate(self, x_count):
        """Adoption rate of the whole population at ``X = x_count``."""
        return (self.n - x_count) * (self.sigma + self.h * x_count / self.n)

    def transition_rate(self, x):
        """Per-agent rate ``pi+(x) = (1 - x)(sigma/n + h x/n)`` at share ``x``."""
        return (1 - x) * (self.sigma / self.n + self.h * x / self.n)


@dataclass(frozen=True)
class KirmanParams:
    """Bidirectional herding among ``n`` agents (extensive form)."""

    sigma1: float
    sigma2: float
    h: float
    n: int

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if min(self.sigma1, self.sigma2, self.h) < 0:
            raise DomainError("rates must be non-negative")
        if max(self.sigma1, self.sigma2, self.h) <= 0:
            raise DomainError("at least one of sigma1, sigma2, h must be positive")

    def birth_rate(self, x_count):
        return (self.n - x_count) * (self.sigma1 + self.h * x_count)

    def death_rate(self, x_count):
        return x_count * (self.sigma2 + self.h * (self.n - x_count))

    def transition_rates(self, x):
        """Non-extensive per-agent rates ``(pi+(x), pi-(x))`` at share ``x``."""
        n = self.n
        return (
            (1 - x) * (self.sigma1 / n + self.h * x),
            x * (self.sigma2 / n + self.h * (1 - x)),
        )


@dataclass(frozen=True)
class JumpPath:
    """Piecewise-constant adopter count: ``states[k]`` holds on ``[times[k], times[k+1])``.

    ``times[0] == 0`` carries the initial state; later entries are event
    times. The path is observed up to ``t_max``.
    """

    times: np.ndarray
    states: np.ndarray
    n: int
    t_max: float

    def __post_init__(self):
        if len(self.times) != len(self.states) or len(self.times) == 0:
            raise ValueError("times and states must be non-empty and equal length")

    @property
    def n_events(self) -> int:
        return len(self.times) - 1

    def state_at(self, t):
        """Right-continuous lookup of ``X(t)``."""
        idx = np.searchsorted(self.times, t, side="right") - 1
        return self.states[idx]


def _check_run_args(n, x0, t_max):
    if int(x0) != x0 or not 0 <= x0 <= n:
        raise DomainError(f"x0 must be an integer in [0, {n}], got {x0}")
    if not (t_max > 0 and math.isfinite(t_max)):
        raise DomainError(f"t_max must be positive and finite, got {t_max}")


def simulate_adoption(p: DiffusionParams, x0: int, t_max: float, seed) -> JumpPath:
    """One exact realisation of the pure-birth adoption chain on ``[0, t_max]``.

    States only increase, so the sequence of rates is known up front; the
    waiting times are drawn in vectorised blocks and cut at ``t_max``.
    """
    _check_run_args(p.n, x0, t_max)
    rng = _as_seed(seed).generator()
    times = [np.zeros(1)]
    x, t = int(x0), 0.0
    while x < p.n:
        levels = np.arange(x, min(x + _BLOCK, p.n))
        rates = p.rate(levels)
        stalled = np.flatnonzero(rates <= 0)
        if stalled.size:
            levels, rates = levels[: stalled[0]], rates[: stalled[0]]
        if levels.size == 0:
            break
        waits = -np.log(open_uniforms(rng, levels.size)) / rates
        event_times = t + np.cumsum(waits)
        keep = int(np.searchsorted(event_times, t_max, side="right"))
        times.append(event_times[:keep])
        x += keep
        if keep < levels.size or stalled.size:
            break
        t = event_times[-1]
    times = np.concatenate(times)
    states = np.arange(x0, x0 + len(times), dtype=np.int64)
    return JumpPath(times, states, p.n, float(t_max))


def simulate_adoption_ensemble(p: DiffusionParams, x0: int, t_max: float, seed, runs: int) -> list[JumpPath]:
    master = _as_seed(seed)
    return [simulate_adoption(p, x0, t_max, master.for_run(i)) for i in range(runs)]


@numba.njit(cache=True)
def _kirman_block(n, s1, s2, h, t_max, x, t, u, record, times_out, states_out, occ):
    """Advance the chain using uniforms ``u`` (two per event).

    Returns ``(x, t, events_written, finished)``. Occupancy time is added to
    ``occ`` as the chain moves; events go to the output buffers when
    ``record`` is set.
    """
    k = 0
    m = 0
    while k + 1 < u.shape[0]:
        lp = (n - x) * (s1 + h * x)
        lm = x * (s2 + h * (n - x))
        tot = lp + lm
        if tot <= 0.0:
            occ[x] += t_max - t
            return x, t_max, m, True
        dt = -math.log(u[k]) / tot
        if t + dt > t_max:
            occ[x] += t_max - t
            return x, t_max, m, True
        occ[x] += dt
        t += dt
        if u[k + 1] * tot < lp:
            x += 1
        else:
            x -= 1
        k += 2
        if record:
            times_out[m] = t
            states_out[m] = x
        m += 1
    return x, t, m, False


def _run_kirman(p: KirmanParams, x0, t_max, seed, record):
    _check_run_args(p.n, x0, t_max)
    rng = _as_seed(seed).generator()
    occ = np.zeros(p.n + 1)
    size = _BLOCK // 2 if record else 0
    times_buf = np.empty(size)
    states_buf = np.empty(size, dtype=np.int64)
    times, states = [np.zeros(1)], [np.array([x0], dtype=np.int64)]
    x, t, done = int(x0), 0.0, False
    while not done:
        u = open_uniforms(rng, _BLOCK)
        x, t, m, done = _kirman_block(
            p.n, float(p.sigma1), float(p.sigma2), float(p.h), float(t_max), x, t, u, record, times_buf, states_buf, occ
        )
        if record:
            times.append(times_buf[:m].copy())
            states.append(states_buf[:m].copy())
    return times, states, occ


def simulate_kirman(p: KirmanParams, x0: int, t_max: float, seed) -> JumpPath:
    """One exact realisation of the bidirectional herding chain on ``[0, t_max]``."""
    times, states, _ = _run_kirman(p, x0, t_max, seed, True)
    return JumpPath(np.concatenate(times), np.concatenate(states), p.n, float(t_max))


def kirman_occupancy(p: KirmanParams, x0: int, t_max: float, seed) -> np.ndarray:
    """Fraction of ``[0, t_max]`` spent in each state, without storing the path.

    Consumes the random stream exactly as :func:`simulate_kirman` does, so
    it equals ``occupancy(simulate_kirman(...))`` for the same arguments.
    Long runs produce tens of millions of events; use this for them.
    """
    _, _, occ = _run_kirman(p, x0, t_max, seed, False)
    return occ / t_max


def occupancy(path: JumpPath) -> np.ndarray:
    """Time-weighted state distribution of a path over ``[0, t_max]``."""
    dwell = np.diff(np.append(path.times, path.t_max))
    return np.bincount(path.states, weights=dwell, minlength=path.n + 1) / path.t_max


def stationary_oracle(p: KirmanParams) -> np.ndarray:
    """Stationary distribution of the herding chain by detailed balance.

    ``pi(X+1) = pi(X) * birth(X) / death(X+1)``, accumulated in log space.
    """
    levels = np.arange(p.n + 1)
    deaths = p.death_rate(levels[1:]).astype(float)
    if np.any(deaths <= 0):
        raise DomainError("death rate vanishes for some X >= 1; the chain has no stationary law on 0..n")
    births = p.birth_rate(levels[:-1]).astype(float)
    with np.errstate(divide="ignore"):
        log_ratio = np.log(births) - np.log(deaths)
    log_pi = np.concatenate(([0.0], np.cumsum(log_ratio)))
    w = np.exp(log_pi - log_pi.max())
    return w / w.sum()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def ensemble_mean_on_grid(paths: list[JumpPath], grid) -> np.ndarray:
    """Mean adopter share ``X(t)/n`` across paths at each grid time."""
    if not paths:
        raise DomainError("need at least one path")
    n = paths[0].n
    if any(pth.n != n for pth in paths):
        raise DomainError("paths must share n")
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing")
    if grid.size and (grid[0] < 0 or grid[-1] > min(pth.t_max for pth in paths)):
        raise DomainError("grid must lie within [0, min t_max]")
    total = np.zeros(grid.size)
    for pth in paths:
        total += pth.state_at(grid)
    return total / (len(paths) * n)


def coupled_tfp_path(path: JumpPath, gamma: float, a0: float) -> Trajectory:
    """TFP driven by the non-adopter share: growth rate ``gamma * (1 - X/n)``.

    Exact: ``log A`` is piecewise linear between events. Sampled at every
    event time and at ``t_max``.
    """
    if not gamma > 0 or not a0 > 0:
        raise DomainError("gamma and a0 must be positive")
    times = path.times
    if path.t_max > times[-1]:
        times = np.append(times, path.t_max)
    rates = gamma * (1.0 - path.states / path.n)
    increments = rates[: len(times) - 1] * np.diff(times)
    log_a = math.log(a0) + np.concatenate(([0.0], np.cumsum(increments)))
    return Trajectory(times, np.exp(log_a))


def log_tfp_on_grid(path: JumpPath, gamma: float, a0: float, grid) -> np.ndarray:
    """``log A(t)`` of :func:`coupled_tfp_path` at arbitrary grid times.

    Linear interpolation of ``log A`` between samples is exact here.
    """
    traj = coupled_tfp_path(path, gamma, a0)
    return np.interp(np.asarray(grid, dtype=float), traj.times, np.log(traj.values))
