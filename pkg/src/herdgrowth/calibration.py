"""Two-stage calibration: fit the frontier, then each catching-up country.

The frontier series (e.g. Germany) is fitted to ``a_m0 * exp(gamma_m * t)``
first. Its parameters are then held fixed while each country's ``(a0, gamma)``
is fitted to the moving-frontier logistic solution. Residuals are unweighted
and in levels. Model time is ``t = year - t0_year``.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError
from .lm import FitResult, LmOptions, lm_minimize
from .model import CatchUpParams, FrontierParams, eval_a_moving, moving_frontier_core

MIN_POINTS = 3


class TfpSeries:
    """Annual TFP observations for one country (immutable)."""

    __slots__ = ("country", "years", "values")

    def __init__(self, country: str, years: Iterable[int], values: Iterable[float]):
        years = np.asarray(list(years))
        values = np.asarray(list(values), dtype=float)
        if years.size and not np.issubdtype(years.dtype, np.integer):
            if not np.all(years == np.round(years)):
                raise DomainError(f"{country}: years must be integers")
        years = years.astype(np.int64)
        if years.shape != values.shape or years.ndim != 1:
            raise DomainError(f"{country}: years and values must be 1-D and equal length")
        if np.any(np.diff(years) <= 0):
            raise DomainError(f"{country}: years must be strictly increasing")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise DomainError(f"{country}: TFP values must be positive and finite")
        years.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "country", str(country))
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("TfpSeries is immutable")

    def __len__(self):
        return self.years.size

    def __eq__(self, other):
        if not isinstance(other, TfpSeries):
            return NotImplemented
        return (
            self.country == other.country
            and np.array_equal(self.years, other.years)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        span = f"{self.years[0]}-{self.years[-1]}" if len(self) else "empty"
        return f"TfpSeries({self.country!r}, {span}, n={len(self)})"

    def times(self, origin: "TimeOrigin") -> np.ndarray:
        if len(self) and self.years[0] < origin.t0_year:
            raise DomainError(f"{self.country}: first year {self.years[0]} precedes t0_year {origin.t0_year}")
        return (self.years - origin.t0_year).astype(float)


@dataclass(frozen=True)
class TimeOrigin:
    t0_year: int

    @classmethod
    def first_year_of(cls, series: TfpSeries) -> "TimeOrigin":
        return cls(int(series.years[0]))


def _check_fit_size(series: TfpSeries):
    if len(series) < MIN_POINTS:
        raise DomainError(f"{series.country}: need at least {MIN_POINTS} observations, got {len(series)}")


def frontier_params(fit: FitResult) -> FrontierParams:
    return FrontierParams(fit.params["a_m0"], fit.params["gamma_m"])


def catchup_params(fit: FitResult) -> CatchUpParams:
    return CatchUpParams(fit.params["a0"], fit.params["gamma"])


def fit_frontier(series: TfpSeries, origin: TimeOrigin, opts: LmOptions | None = None) -> FitResult:
    """Fit ``a_m0 * exp(gamma_m * t)`` to the reference country's series.

    Starts from the log-linear regression of ``log y`` on ``t``.
    """
    _check_fit_size(series)
    t = series.times(origin)
    y = series.values
    slope, intercept = np.polyfit(t, np.log(y), 1)

    def residuals(p):
        return p[0] * np.exp(p[1] * t) - y

    fit = lm_minimize(residuals, {"a_m0": float(np.exp(intercept)), "gamma_m": float(slope)}, opts)
    flags = () if fit.params["a_m0"] > 0 else ("a_m0 <= 0",)
    return replace(fit, country=series.country, t0_year=origin.t0_year, flags=flags)


def fit_catchup(
    series: TfpSeries,
    frontier: FrontierParams,
    origin: TimeOrigin,
    opts: LmOptions | None = None,
    init: Mapping[str, float] | None = None,
) -> FitResult:
    """Fit a country's ``(a0, gamma)`` against a fixed frontier.

    Default start: ``a0`` = first observation, ``gamma`` = 0.1. The fit is
    unconstrained; ``gamma <= gamma_m`` or ``a0 <= 0`` at the optimum is
    reported in ``flags``.
    """
    _check_fit_size(series)
    t = series.times(origin)
    y = series.values
    am0, gm = frontier.a_m0, frontier.gamma_m

    def residuals(p):
        return moving_frontier_core(am0, gm, p[0], p[1], t) - y

    start = dict(init) if init is not None else {"a0": float(y[0]), "gamma": 0.1}
    fit = lm_minimize(residuals, start, opts)
    flags = []
    if fit.params["a0"] <= 0:
        flags.append("a0 <= 0")
    if fit.params["gamma"] <= gm:
        flags.append("gamma <= gamma_m: no long-run convergence toward the frontier")
    return replace(fit, country=series.country, t0_year=origin.t0_year, frontier=frontier, flags=tuple(flags))


def fit_all(
    dataset: Mapping[str, TfpSeries],
    reference: str,
    countries: Sequence[str],
    origin: TimeOrigin | None = None,
    opts: LmOptions | None = None,
) -> tuple[FitResult, list[FitResult]]:
    """Frontier fit on ``reference``, then each of ``countries`` against it.

    ``origin`` defaults to the reference series' first year.
    """
    missing = [c for c in [reference, *countries] if c not in dataset]
    if missing:
        raise DomainError(f"countries not in dataset: {', '.join(missing)}")
    ref = dataset[reference]
    origin = origin or TimeOrigin.first_year_of(ref)
    frontier_fit = fit_frontier(ref, origin, opts)
    frontier = frontier_params(frontier_fit)
    return frontier_fit, [fit_catchup(dataset[c], frontier, origin, opts) for c in countries]


def standard_errors(fit: FitResult) -> dict[str, float]:
    """Square roots of the covariance diagonal, keyed by parameter name."""
    if not fit.converged:
        warnings.warn(f"standard errors of a non-converged fit ({fit.country})", RuntimeWarning, stacklevel=2)
    se = np.sqrt(np.clip(np.diag(fit.covariance), 0.0, None))
    return dict(zip(fit.names, map(float, se)))


def project(
    frontier: FrontierParams, c: CatchUpParams, origin: TimeOrigin, years: Iterable[int]
) -> list[tuple[int, float]]:
    """Model TFP at each calendar year."""
    years = [int(y) for y in years]
    if any(y < origin.t0_year for y in years):
        raise DomainError(f"projection years must not precede t0_year {origin.t0_year}")
    values = np.atleast_1d(eval_a_moving(frontier, c, np.array([y - origin.t0_year for y in years], dtype=float)))
    return list(zip(years, map(float, values)))


def rank_by_gamma(fits: Iterable[tuple[str, FitResult]]) -> list[tuple[str, FitResult]]:
    """Descending ``gamma``; ties broken by country name."""
    fits = list(fits)
    if any("gamma" not in f.params for _, f in fits):
        raise DomainError("every fit must carry a gamma parameter")
    return sorted(fits, key=lambda item: (-item[1].params["gamma"], item[0]))


# -- JSON ---------------------------------------------------------------------


def fit_to_dict(fit: FitResult) -> dict:
    cov = np.asarray(fit.covariance, dtype=float)
    return {
        "country": fit.country,
        "params": dict(fit.params),
        "stderr": dict(fit.stderr),
        "covariance": {"dim": int(cov.shape[0]), "data": [float(v) for v in cov.ravel()]},
        "ssr": float(fit.ssr) if np.isfinite(fit.ssr) else None,
        "n_obs": int(fit.n_obs),
        "iterations": int(fit.iterations),
        "converged": bool(fit.converged),
        "t0_year": fit.t0_year,
        "frontier": None if fit.frontier is None else {"a_m0": fit.frontier.a_m0, "gamma_m": fit.frontier.gamma_m},
        "flags": list(fit.flags),
    }


def fit_from_dict(d: Mapping) -> FitResult:
    try:
        dim = int(d["covariance"]["dim"])
        cov = np.asarray(d["covariance"]["data"], dtype=float).reshape(dim, dim)
        frontier = d.get("frontier")
        return FitResult(
            params={k: float(v) for k, v in d["params"].items()},
            stderr={k: float(v) for k, v in d["stderr"].items()},
            covariance=cov,
            ssr=float("nan") if d["ssr"] is None else float(d["ssr"]),
            n_obs=int(d["n_obs"]),
            iterations=int(d["iterations"]),
            converged=bool(d["converged"]),
            country=d.get("country"),
            t0_year=None if d.get("t0_year") is None else int(d["t0_year"]),
            frontier=None if frontier is None else FrontierParams(float(frontier["a_m0"]), float(frontier["gamma_m"])),
            flags=tuple(d.get("flags", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed fit record: {exc}") from exc


def fits_document(frontier_fit: FitResult | None, country_fits: Sequence[FitResult], reference: str | None = None) -> dict:
    """Combined document written by ``fit-all`` and read by ``table``/``project``."""
    t0 = frontier_fit.t0_year if frontier_fit is not None else (country_fits[0].t0_year if country_fits else None)
    return {
        "reference": reference if reference is not None else (frontier_fit.country if frontier_fit else None),
        "t0_year": t0,
        "frontier": None if frontier_fit is None else fit_to_dict(frontier_fit),
        "countries": [fit_to_dict(f) for f in country_fits],
    }


def dumps_fits(doc: Mapping) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def load_fits_document(text: str) -> tuple[FitResult | None, list[FitResult]]:
    """Parse a combined fits document (or a bare list of fit records)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"fits file is not valid JSON: {exc}") from exc
    if isinstance(doc, list):
        return None, [fit_from_dict(d) for d in doc]
    frontier = doc.get("frontier")
    return (
        None if frontier is None else fit_from_dict(frontier),
        [fit_from_dict(d) for d in doc.get("countries", [])],
    )
