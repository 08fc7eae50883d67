"""Published descriptive tables (average/minimum/maximum disagreement) as fixtures.

File layout is ``geo,indicator,stat,value`` with ``stat`` in {mean, min, max}.
Values may use a decimal comma (quote the field) or a decimal point; geos may
be codes or country names.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

from disagreement import catalog
from disagreement.aggregate import SummaryRow

STATS = ("mean", "min", "max")
PUBLISHED_TOLERANCE = 0.0015

SECTOR_QUESTIONS = {
    catalog.SECTOR_INDICATORS[s]: tuple(q.indicator for q in catalog.questions_of(s)) for s in catalog.SURVEYS
}

# Printed values known to contradict the rest of the table; checked and reported, not enforced.
KNOWN_ANOMALIES = {("EU", "D_SERV")}


class TableFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TableFixture:
    values: dict[tuple[str, str, str], float]

    def get(self, geo: str, indicator: str, stat: str = "mean") -> float:
        return self.values[(geo, indicator, stat)]

    def has(self, geo: str, indicator: str, stat: str = "mean") -> bool:
        return (geo, indicator, stat) in self.values

    @property
    def geos(self) -> list[str]:
        order = list(catalog.GEOS)
        return sorted({k[0] for k in self.values}, key=order.index)

    def summary_rows(self, indicator: str, with_extremes: bool = False) -> list[SummaryRow]:
        """Published averages as summary rows.

        With ``with_extremes`` the min/max columns are attached too, which
        raises for rows whose printed mean falls outside them.
        """
        rows = []
        for geo in self.geos:
            if not self.has(geo, indicator):
                continue
            lo = hi = None
            if with_extremes:
                lo = self.values.get((geo, indicator, "min"))
                hi = self.values.get((geo, indicator, "max"))
            rows.append(SummaryRow(geo, indicator, self.get(geo, indicator), lo, hi))
        return rows

    def inconsistent_summaries(self) -> list[tuple[str, str]]:
        """(geo, indicator) pairs whose published mean lies outside [min, max]."""
        bad = []
        for (geo, ind, stat), mean in self.values.items():
            if stat != "mean":
                continue
            lo = self.values.get((geo, ind, "min"), -math.inf)
            hi = self.values.get((geo, ind, "max"), math.inf)
            if not lo <= mean <= hi:
                bad.append((geo, ind))
        return sorted(bad)


def parse_table_fixture(text: str) -> TableFixture:
    reader = csv.reader(io.StringIO(text))
    header = [h.strip().lower() for h in next(reader, [])]
    if header[:4] != ["geo", "indicator", "stat", "value"]:
        raise TableFormatError(f"expected header geo,indicator,stat,value, got {','.join(header)}")
    values: dict[tuple[str, str, str], float] = {}
    for lineno, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        # an unquoted decimal comma splits the value over two fields
        if len(fields) == 5 and fields[3].strip().isdigit() and fields[4].strip().isdigit():
            fields = fields[:3] + [f"{fields[3]}.{fields[4]}"]
        if len(fields) != 4:
            raise TableFormatError(f"row {lineno}: expected 4 fields, got {len(fields)}")
        geo = catalog.resolve_geo(fields[0])
        indicator = fields[1].strip()
        if not catalog.is_indicator(indicator):
            raise TableFormatError(f"row {lineno}: unknown indicator {indicator!r}")
        stat = fields[2].strip().lower()
        if stat not in STATS:
            raise TableFormatError(f"row {lineno}: stat must be one of {STATS}, got {stat!r}")
        try:
            value = float(fields[3].strip().replace(",", "."))
        except ValueError:
            raise TableFormatError(f"row {lineno}: non-numeric value {fields[3]!r}") from None
        key = (geo, indicator, stat)
        if key in values:
            raise TableFormatError(f"row {lineno}: duplicate entry {key}")
        values[key] = value
    return TableFixture(values)


def load_table_fixture(path=None) -> TableFixture:
    """Load a fixture file; without a path, the bundled appendix tables."""
    if path is None:
        text = resources.files("disagreement").joinpath("data/appendix_tables.csv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8-sig") as fh:
            text = fh.read()
    return parse_table_fixture(text)


@dataclass(frozen=True)
class CompositeCheck:
    geo: str
    indicator: str
    recomputed: float
    published: float
    tolerance: float = PUBLISHED_TOLERANCE

    @property
    def error(self) -> float:
        return abs(self.recomputed - self.published)

    @property
    def ok(self) -> bool:
        return self.error <= self.tolerance

    @property
    def known_anomaly(self) -> bool:
        return (self.geo, self.indicator) in KNOWN_ANOMALIES


def _mean(xs: Iterable[float]) -> float:
    xs = list(xs)
    return math.fsum(xs) / len(xs)


def composite_checks(table: TableFixture, geo: str) -> list[CompositeCheck]:
    """Recompute every composite average of one geo from its published constituents.

    Sector means come from the question columns; D_BUSI from the four
    published business sector means; D_TOTAL from published D_BUSI and D_CONS.
    """
    checks = []
    for sector, questions in SECTOR_QUESTIONS.items():
        if table.has(geo, sector) and all(table.has(geo, q) for q in questions):
            checks.append(CompositeCheck(geo, sector, _mean(table.get(geo, q) for q in questions), table.get(geo, sector)))
    if table.has(geo, catalog.D_BUSI) and all(table.has(geo, s) for s in catalog.BUSINESS_SECTORS):
        recomputed = _mean(table.get(geo, s) for s in catalog.BUSINESS_SECTORS)
        checks.append(CompositeCheck(geo, catalog.D_BUSI, recomputed, table.get(geo, catalog.D_BUSI)))
    parts = (catalog.D_BUSI, catalog.D_CONS)
    if table.has(geo, catalog.D_TOTAL) and all(table.has(geo, p) for p in parts):
        recomputed = _mean(table.get(geo, p) for p in parts)
        checks.append(CompositeCheck(geo, catalog.D_TOTAL, recomputed, table.get(geo, catalog.D_TOTAL)))
    return checks
