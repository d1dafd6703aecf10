"""Reading TFP data and writing fits, projection tables and curve samples.

Input format is long-form CSV with header ``country,year,value`` (UTF-8, LF
or CRLF line endings, ``.`` as decimal point). All writers return ``bytes``.
"""
from __future__ import annotations

import csv
import io
import json
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .calibration import TfpSeries, TimeOrigin, catchup_params, project, rank_by_gamma
from .errors import DomainError, DuplicateKeyError, ParseError
from .lm import FitResult
from .model import (
    AdoptionParams,
    CatchUpParams,
    FixedFrontierParams,
    FrontierParams,
    KremerParams,
    eval_a_fixed,
    eval_a_moving,
    eval_frontier,
    eval_x,
    kremer_tfp,
)

TFP_HEADER = ["country", "year", "value"]
_INT = re.compile(r"[+-]?\d+")
_DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


class Dataset(Mapping):
    """Read-only mapping from country identifier to :class:`TfpSeries`."""

    def __init__(self, series: Iterable[TfpSeries] = ()):
        self._series: dict[str, TfpSeries] = {}
        for s in series:
            if s.country in self._series:
                raise DuplicateKeyError(f"duplicate country {s.country!r}")
            self._series[s.country] = s

    def __getitem__(self, country):
        return self._series[country]

    def __iter__(self):
        return iter(self._series)

    def __len__(self):
        return len(self._series)

    def __repr__(self):
        return f"Dataset({list(self._series)})"


def _text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        try:
            return bytes(data).decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    return data


def parse_tfp_csv(data: bytes | str) -> Dataset:
    """Parse ``country,year,value`` rows into a :class:`Dataset`.

    Rows may come in any order; each series is sorted by year. Blank lines
    are ignored.
    """
    reader = csv.reader(io.StringIO(_text(data), newline=""))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != TFP_HEADER:
        raise ParseError(f"expected header {','.join(TFP_HEADER)!r}, got {header!r}", line=1)

    rows: dict[str, dict[int, float]] = {}
    for fields in reader:
        line = reader.line_num
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", line=line)
        country, year_s, value_s = (f.strip() for f in fields)
        if not country:
            raise ParseError("empty country identifier", line=line)
        if not _INT.fullmatch(year_s):
            raise ParseError(f"year {year_s!r} is not an integer", line=line)
        if not _DECIMAL.fullmatch(value_s):
            raise ParseError(f"value {value_s!r} is not a decimal number", line=line)
        year, value = int(year_s), float(value_s)
        if not value > 0 or not np.isfinite(value):
            raise DomainError(f"line {line}: TFP value must be positive, got {value_s}")
        by_year = rows.setdefault(country, {})
        if year in by_year:
            raise DuplicateKeyError(f"duplicate observation for ({country}, {year})", line=line)
        by_year[year] = value

    return Dataset(
        TfpSeries(country, sorted(by_year), [by_year[y] for y in sorted(by_year)])
        for country, by_year in rows.items()
    )


def write_tfp_csv(dataset: Mapping[str, TfpSeries]) -> bytes:
    """Inverse of :func:`parse_tfp_csv`; values keep 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TFP_HEADER)
    for country, s in dataset.items():
        for y, v in zip(s.years, s.values):
            w.writerow([country, int(y), format(float(v), ".17g")])
    return buf.getvalue().encode()


# -- projection tables --------------------------------------------------------


@dataclass(frozen=True)
class ProjectionRow:
    country: str
    a0: float
    stderr_a0: float
    gamma: float
    stderr_gamma: float
    projections: dict[int, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ProjectionTable:
    """One row per country, descending ``gamma``."""

    rows: tuple[ProjectionRow, ...]
    years: tuple[int, ...] = (2030, 2050)

    def __post_init__(self):
        names = [r.country for r in self.rows]
        if len(set(names)) != len(names):
            raise DomainError("duplicate country in projection table")
        gammas = [r.gamma for r in self.rows]
        if any(a < b for a, b in zip(gammas, gammas[1:])):
            raise DomainError("projection table rows must be ordered by descending gamma")
        if any(set(r.projections) != set(self.years) for r in self.rows):
            raise DomainError("every row needs a projection for each table year")

    @property
    def countries(self) -> list[str]:
        return [r.country for r in self.rows]


def projection_table(
    fits: Sequence[FitResult],
    years: Sequence[int] = (2030, 2050),
    frontier: FrontierParams | None = None,
    origin: TimeOrigin | None = None,
) -> ProjectionTable:
    """Build a table from country fits.

    The frontier and time origin default to the ones embedded in each fit.
    """
    rows = []
    for country, fit in rank_by_gamma((f.country, f) for f in fits):
        f = frontier or fit.frontier
        o = origin or (TimeOrigin(fit.t0_year) if fit.t0_year is not None else None)
        if f is None or o is None:
            raise DomainError(f"{country}: fit lacks a frontier or t0_year")
        c = catchup_params(fit)
        rows.append(
            ProjectionRow(
                country=country,
                a0=c.a0,
                stderr_a0=fit.stderr["a0"],
                gamma=c.gamma,
                stderr_gamma=fit.stderr["gamma"],
                projections=dict(project(f, c, o, years)),
            )
        )
    return ProjectionTable(tuple(rows), tuple(int(y) for y in years))


def _columns(years):
    return ["country", "a0", "stderr_a0", "gamma", "stderr_gamma", *(f"a{y}" for y in years)]


def _row_values(row, years):
    return [row.a0, row.stderr_a0, row.gamma, row.stderr_gamma, *(row.projections[y] for y in years)]


def write_projection_table(table: ProjectionTable, fmt: str = "csv") -> bytes:
    """CSV (6 significant digits) or JSON (full precision, same field names)."""
    cols = _columns(table.years)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in table.rows:
            w.writerow([row.country, *(format(v, ".6g") for v in _row_values(row, table.years))])
        return buf.getvalue().encode()
    if fmt == "json":
        records = [dict(zip(cols, [row.country, *_row_values(row, table.years)])) for row in table.rows]
        return (json.dumps(records, indent=2) + "\n").encode()
    raise DomainError(f"unknown table format {fmt!r} (use csv or json)")


# -- curve samples ------------------------------------------------------------


@dataclass(frozen=True)
class CurveSpec:
    """A named closed-form curve.

    ``kind`` is one of ``fixed`` (a0, a_m, h), ``moving`` (a_m0, gamma_m, a0,
    gamma), ``frontier`` (a_m0, gamma_m), ``adoption`` (sigma, h; samples the
    adopter share) or ``kremer`` (a0, gamma, n).
    """

    name: str
    kind: str
    params: dict

    def evaluator(self):
        p = self.params
        try:
            if self.kind == "fixed":
                m = FixedFrontierParams(p["a0"], p["a_m"], p["h"])
                return lambda t: eval_a_fixed(m, t)
            if self.kind == "moving":
                f, c = FrontierParams(p["a_m0"], p["gamma_m"]), CatchUpParams(p["a0"], p["gamma"])
                return lambda t: eval_a_moving(f, c, t)
            if self.kind == "frontier":
                f = FrontierParams(p["a_m0"], p["gamma_m"])
                return lambda t: eval_frontier(f, t)
            if self.kind == "adoption":
                a = AdoptionParams(p["sigma"], p["h"])
                return lambda t: eval_x(a, t)
            if self.kind == "kremer":
                k = KremerParams(p["a0"], p["gamma"], p["n"])
                return lambda t: kremer_tfp(k, t)
        except KeyError as exc:
            raise DomainError(f"curve {self.name!r} ({self.kind}) is missing parameter {exc}") from exc
        raise DomainError(f"curve {self.name!r}: unknown kind {self.kind!r}")


def curve_spec_from_dict(d: Mapping) -> CurveSpec:
    d = dict(d)
    try:
        name, kind = str(d.pop("name")), str(d.pop("kind"))
    except KeyError as exc:
        raise DomainError(f"curve spec lacks {exc}") from exc
    return CurveSpec(name, kind, {k: float(v) for k, v in d.items()})


def load_curve_document(text: str) -> tuple[list[CurveSpec], TimeOrigin]:
    """``{"t0_year": 1995, "curves": [{"name": ..., "kind": ..., ...}]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"curve spec is not valid JSON: {exc}") from exc
    return [curve_spec_from_dict(c) for c in doc.get("curves", [])], TimeOrigin(int(doc.get("t0_year", 0)))


def fixed_frontier_family(a0=1.0, a_m=2.0, h0=0.05, count=11) -> list[CurveSpec]:
    """Fixed-frontier curves with ``h = h0 * 2**(i/2)``, ``i = 0..count-1``."""
    return [
        CurveSpec(f"fixed_i{i}", "fixed", {"a0": a0, "a_m": a_m, "h": h0 * 2 ** (i / 2)})
        for i in range(count)
    ]


def _fmt_year(y: float) -> str:
    return str(int(y)) if float(y).is_integer() else repr(float(y))


def emit_curve_samples(specs: Sequence[CurveSpec], grid, origin: TimeOrigin) -> bytes:
    """Long-form CSV ``series,year,value``; ``grid`` holds model times.

    The ``year`` column is ``origin.t0_year + t``.
    """
    grid = np.asarray(grid, dtype=float)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series", "year", "value"])
    for spec in specs:
        values = np.atleast_1d(spec.evaluator()(grid))
        for t, v in zip(grid, values):
            w.writerow([spec.name, _fmt_year(origin.t0_year + t), repr(float(v))])
    return buf.getvalue().encode()
