"""Levenberg-Marquardt least squares with finite-difference Jacobians."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, RankDeficiencyError

log = logging.getLogger(__name__)

# damping beyond this is treated as "no productive step exists"
_MAX_DAMPING = 1e16


@dataclass(frozen=True)
class LmOptions:
    initial_damping: float = 1e-3
    damping_factor: float = 10.0
    max_iterations: int = 200
    ssr_rtol: float = 1e-10
    gradient_tol: float = 1e-10
    jacobian_rel_step: float = 1e-6

    def __post_init__(self):
        for name in ("initial_damping", "ssr_rtol", "gradient_tol", "jacobian_rel_step"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not self.damping_factor > 1:
            raise DomainError("damping_factor must exceed 1")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")


@dataclass(frozen=True)
class FitResult:
    """Outcome of a least-squares fit.

    ``covariance`` is ``s**2 (J^T J)^-1`` with ``s**2 = ssr / (n_obs - n_params)``,
    evaluated at the returned parameters. ``flags`` collects post-fit domain
    warnings (the fit is kept, not rejected).
    """

    params: dict[str, float]
    stderr: dict[str, float]
    covariance: np.ndarray
    ssr: float
    n_obs: int
    iterations: int
    converged: bool
    country: str | None = None
    t0_year: int | None = None
    frontier: object | None = None
    flags: tuple[str, ...] = field(default=())
    ssr_history: tuple[float, ...] = field(default=(), repr=False, compare=False)

    @property
    def names(self) -> list[str]:
        return list(self.params)

    def value_vector(self) -> np.ndarray:
        return np.array(list(self.params.values()))


def numeric_jacobian(fun, p: np.ndarray, rel_step: float) -> np.ndarray:
    """Central-difference Jacobian of ``fun`` at ``p``.

    The step for parameter ``j`` is ``rel_step * |p_j|`` (``rel_step`` when
    ``p_j`` is zero).
    """
    p = np.asarray(p, dtype=float)
    cols = []
    for j in range(p.size):
        step = rel_step * (abs(p[j]) if p[j] != 0 else 1.0)
        hi, lo = p.copy(), p.copy()
        hi[j] += step
        lo[j] -= step
        # use the representable spacing, not the nominal one
        cols.append((np.asarray(fun(hi)) - np.asarray(fun(lo))) / (hi[j] - lo[j]))
    return np.column_stack(cols)


def _damping_cutoff(jtj: np.ndarray, scale: np.ndarray) -> float:
    # Fletcher (1971): below 1/trace(S^-1) of the scaled normal matrix S,
    # damping cannot usefully shorten the step, so use the Gauss-Newton step.
    s = jtj / np.sqrt(np.outer(scale, scale))
    try:
        tr = float(np.trace(np.linalg.inv(s)))
    except np.linalg.LinAlgError:
        return 0.0
    return 1.0 / tr if math.isfinite(tr) and tr > 0 else 0.0


def _ssr(r):
    return float(r @ r)


def covariance_at(jac: np.ndarray, ssr: float) -> np.ndarray:
    n_obs, n_par = jac.shape
    jtj = jac.T @ jac
    if np.linalg.matrix_rank(jtj) < n_par:
        raise RankDeficiencyError("J^T J is singular at the optimum")
    cov = ssr / (n_obs - n_par) * np.linalg.inv(jtj)
    return 0.5 * (cov + cov.T)


def lm_minimize(
    residuals: Callable[[np.ndarray], np.ndarray],
    init: Mapping[str, float],
    opts: LmOptions | None = None,
) -> FitResult:
    """Minimise ``sum(residuals(p)**2)`` starting from ``init``.

    Each iteration solves ``(J^T J + lam * diag(J^T J)) dp = -J^T r``. A step
    that lowers the SSR is accepted and ``lam`` shrinks by the damping
    factor; otherwise ``lam`` grows and the step is retried. Non-finite trial
    residuals count as a failed step. Iteration stops when the relative SSR
    change or the gradient infinity-norm falls below tolerance, or after
    ``max_iterations`` accepted steps (``converged=False``).

    ``residuals`` receives parameters as an array ordered like ``init``.
    """
    opts = opts or LmOptions()
    names = list(init)
    p = np.array([float(init[k]) for k in names])
    r = np.asarray(residuals(p), dtype=float)
    n_obs, n_par = r.size, p.size
    if n_obs <= n_par:
        raise DomainError(f"need more residuals ({n_obs}) than parameters ({n_par})")
    if not np.all(np.isfinite(r)):
        raise DomainError("residuals are not finite at the initial parameters")

    ssr = _ssr(r)
    history = [ssr]
    lam = opts.initial_damping
    iterations = 0
    converged = False
    while True:
        jac = numeric_jacobian(residuals, p, opts.jacobian_rel_step)
        grad = jac.T @ r
        if np.max(np.abs(grad)) < opts.gradient_tol or ssr == 0.0:
            converged = True
            break
        if iterations >= opts.max_iterations:
            break
        jtj = jac.T @ jac
        scale = np.diag(jtj).copy()
        scale[scale <= 0] = 1.0
        cutoff = _damping_cutoff(jtj, scale)

        stalled = gave_up = False
        while True:
            eff = 0.0 if lam < cutoff else lam
            try:
                step = np.linalg.solve(jtj + eff * np.diag(scale), -grad)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(jtj + eff * np.diag(scale), -grad, rcond=None)[0]
            trial = p + step
            with np.errstate(all="ignore"):
                r_trial = np.asarray(residuals(trial), dtype=float)
            ssr_trial = _ssr(r_trial) if np.all(np.isfinite(r_trial)) else math.inf
            if ssr_trial < ssr:
                lam /= opts.damping_factor
                break
            if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(np.abs(p), 1e-300)):
                stalled = True
                break
            lam = max(lam, cutoff) * opts.damping_factor
            if lam > _MAX_DAMPING:
                gave_up = True
                break
        if stalled or gave_up:
            # a stall means no representable step lowers the SSR: a minimum
            converged = stalled
            break

        change = (ssr - ssr_trial) / ssr
        p, r, ssr = trial, r_trial, ssr_trial
        iterations += 1
        history.append(ssr)
        log.debug("lm iter %d ssr=%.6g lam=%.3g", iterations, ssr, lam)
        if change < opts.ssr_rtol:
            converged = True
            break

    jac = numeric_jacobian(residuals, p, opts.jacobian_rel_step)
    cov = covariance_at(jac, ssr)
    stderr = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return FitResult(
        params=dict(zip(names, map(float, p))),
        stderr=dict(zip(names, map(float, stderr))),
        covariance=cov,
        ssr=ssr,
        n_obs=n_obs,
        iterations=iterations,
        converged=converged,
        ssr_history=tuple(history),
    )
