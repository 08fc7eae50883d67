"""Indicator time series, composites, descriptive statistics and rankings.

Every composite is an unweighted arithmetic mean over the constituents that
have a value at a given period (skip-missing), so a truncated constituent
does not end the composite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from disagreement import catalog
from disagreement.catalog import BUSINESS_SECTORS, D_BUSI, D_CONS, D_TOTAL, SECTOR_INDICATORS, Period
from disagreement.ingest import Dataset
from disagreement.metrics import discrepancy


class AggregationError(ValueError):
    pass


class EmptySeriesError(AggregationError):
    pass


@dataclass(frozen=True)
class IndicatorSeries:
    """Values in [0, 1] indexed by strictly increasing periods.

    ``coverage`` holds, per point, (constituents used, constituents expected);
    it is empty for question-level series.
    """

    geo: str
    indicator: str
    points: tuple[tuple[Period, float], ...]
    coverage: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        points = tuple((p, float(v)) for p, v in self.points)
        object.__setattr__(self, "points", points)
        for (a, _), (b, _) in zip(points, points[1:]):
            if not a < b:
                raise AggregationError(f"{self.geo}/{self.indicator}: periods not strictly increasing at {b}")
        for p, v in points:
            if not 0.0 <= v <= 1.0:
                raise AggregationError(f"{self.geo}/{self.indicator}: value {v!r} at {p} outside [0, 1]")
        if self.coverage and len(self.coverage) != len(points):
            raise AggregationError("coverage length must match points")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def periods(self) -> list[Period]:
        return [p for p, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.points]

    def as_dict(self) -> dict[Period, float]:
        return dict(self.points)


def question_series(dataset: Dataset, geo: str, question_code: str) -> IndicatorSeries:
    q = catalog.question(question_code)
    obs = dataset.for_series(geo, q.code)
    if not obs:
        raise EmptySeriesError(f"no observations for {geo}/{q.code}")
    return IndicatorSeries(geo, q.indicator, tuple((o.period, discrepancy(o.shares)) for o in obs))


def _mean_skip_missing(series: Sequence[IndicatorSeries], geo: str, indicator: str) -> IndicatorSeries:
    if not series:
        raise AggregationError(f"no constituents for {indicator}")
    geos = {s.geo for s in series}
    if len(geos) != 1:
        raise AggregationError(f"constituents of {indicator} mix geographies: {sorted(geos)}")
    lookups = [s.as_dict() for s in series]
    periods = sorted(set().union(*lookups))
    points, coverage = [], []
    for p in periods:
        vals = [d[p] for d in lookups if p in d]
        mean = math.fsum(vals) / len(vals)
        points.append((p, min(max(mean, 0.0), 1.0)))
        coverage.append((len(vals), len(series)))
    return IndicatorSeries(geo, indicator, tuple(points), tuple(coverage))


def _check_distinct(series: Sequence[IndicatorSeries]) -> None:
    names = [s.indicator for s in series]
    if len(set(names)) != len(names):
        raise AggregationError(f"duplicate constituents: {names}")


def sector_series(question_series: Sequence[IndicatorSeries], sector: str) -> IndicatorSeries:
    """Mean of one survey's question-level series for one geo."""
    if sector not in SECTOR_INDICATORS.values():
        raise AggregationError(f"{sector!r} is not a sector indicator")
    if not question_series:
        raise AggregationError(f"empty constituent list for {sector}")
    survey = sector[2:]
    for s in question_series:
        try:
            own = catalog.sector_of_indicator(s.indicator)
        except catalog.CatalogError:
            raise AggregationError(f"{s.indicator} is not a question-level indicator") from None
        if own != survey:
            raise AggregationError(f"{s.indicator} belongs to {own}, not {survey}")
    _check_distinct(question_series)
    return _mean_skip_missing(question_series, question_series[0].geo, sector)


def consumer_series(question_series: Sequence[IndicatorSeries]) -> IndicatorSeries:
    expected = len(catalog.questions_of("CONS"))
    if len(question_series) != expected:
        raise AggregationError(f"consumer indicator needs {expected} question series, got {len(question_series)}")
    return sector_series(question_series, D_CONS)


def business_series(sectors: Sequence[IndicatorSeries]) -> IndicatorSeries:
    """Mean of the industry, services, retail and building sector series."""
    got = sorted(s.indicator for s in sectors)
    if got != sorted(BUSINESS_SECTORS):
        raise AggregationError(f"business indicator needs {', '.join(BUSINESS_SECTORS)}; got {', '.join(got)}")
    return _mean_skip_missing(sectors, sectors[0].geo, D_BUSI)


def total_series(business: IndicatorSeries, consumer: IndicatorSeries) -> IndicatorSeries:
    if business.indicator != D_BUSI or consumer.indicator != D_CONS:
        raise AggregationError(
            f"total indicator needs {D_BUSI} and {D_CONS}; got {business.indicator} and {consumer.indicator}"
        )
    if business.geo != consumer.geo:
        raise AggregationError(f"geo mismatch: {business.geo} vs {consumer.geo}")
    return _mean_skip_missing([business, consumer], business.geo, D_TOTAL)


def build_indicators(dataset: Dataset, geo: str) -> dict[str, IndicatorSeries]:
    """All indicator series computable for one geo, in catalog order.

    Composites are built from whatever constituents exist; the strict
    constituent checks of :func:`business_series` and friends apply only
    when every constituent is present.
    """
    out: dict[str, IndicatorSeries] = {}
    codes = set(q for g, q in dataset.series_keys() if g == geo)
    for survey in catalog.SURVEYS:
        qs = [question_series(dataset, geo, q.code) for q in catalog.questions_of(survey) if q.code in codes]
        for s in qs:
            out[s.indicator] = s
        if qs:
            out[SECTOR_INDICATORS[survey]] = sector_series(qs, SECTOR_INDICATORS[survey])
    sectors = [out[s] for s in BUSINESS_SECTORS if s in out]
    if sectors:
        if len(sectors) == len(BUSINESS_SECTORS):
            out[D_BUSI] = business_series(sectors)
        else:
            out[D_BUSI] = _mean_skip_missing(sectors, geo, D_BUSI)
    if D_BUSI in out and D_CONS in out:
        out[D_TOTAL] = total_series(out[D_BUSI], out[D_CONS])
    return out


def build_all(dataset: Dataset) -> dict[str, dict[str, IndicatorSeries]]:
    return {geo: build_indicators(dataset, geo) for geo in dataset.geos}


# -- statistics ---------------------------------------------------------------

@dataclass(frozen=True)
class SummaryRow:
    """Mean/min/max of one indicator for one geo.

    ``minimum``/``maximum``/``n_obs`` may be unknown when the row comes from a
    table that only publishes averages.
    """

    geo: str
    indicator: str
    mean: float
    minimum: float | None = None
    maximum: float | None = None
    n_obs: int | None = None

    def __post_init__(self) -> None:
        lo = self.minimum if self.minimum is not None else self.mean
        hi = self.maximum if self.maximum is not None else self.mean
        if not lo - 1e-12 <= self.mean <= hi + 1e-12:
            raise AggregationError(
                f"{self.geo}/{self.indicator}: mean {self.mean} not within [{self.minimum}, {self.maximum}]"
            )


def summarize(series: IndicatorSeries) -> SummaryRow:
    if not series.points:
        raise EmptySeriesError(f"cannot summarize empty series {series.geo}/{series.indicator}")
    vals = series.values
    mean = math.fsum(vals) / len(vals)
    lo, hi = min(vals), max(vals)
    return SummaryRow(series.geo, series.indicator, min(max(mean, lo), hi), lo, hi, len(vals))


@dataclass(frozen=True)
class RankingTable:
    indicator: str
    entries: tuple[tuple[str, float], ...]

    @property
    def geos(self) -> list[str]:
        return [g for g, _ in self.entries]


def rank(rows: Iterable[SummaryRow]) -> RankingTable:
    """Order geos by increasing mean; equal means fall back to geo code order."""
    rows = list(rows)
    if not rows:
        raise AggregationError("nothing to rank")
    indicators = {r.indicator for r in rows}
    if len(indicators) != 1:
        raise AggregationError(f"rows mix indicators: {sorted(indicators)}")
    seen: set[str] = set()
    for r in rows:
        if r.geo in seen:
            raise AggregationError(f"duplicate geo {r.geo} in ranking")
        seen.add(r.geo)
    ordered = sorted(rows, key=lambda r: (r.mean, r.geo))
    return RankingTable(rows[0].indicator, tuple((r.geo, r.mean) for r in ordered))
