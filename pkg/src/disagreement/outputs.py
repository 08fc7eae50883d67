"""Readers and writers for series, summary and ranking files."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable

from disagreement import catalog
from disagreement.aggregate import IndicatorSeries, RankingTable, SummaryRow
from disagreement.catalog import parse_period

SERIES_HEADER = ("geo", "indicator", "period", "value")
SUMMARY_HEADER = ("geo", "indicator", "mean", "min", "max", "n_obs")


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def series_to_csv(series: Iterable[IndicatorSeries]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SERIES_HEADER)
    for s in series:
        for p, v in s.points:
            w.writerow([s.geo, s.indicator, str(p), _num(v)])
    return buf.getvalue()


def series_to_json(series: Iterable[IndicatorSeries], config: dict) -> str:
    payload = {
        "config": config,
        "series": [
            {"geo": s.geo, "indicator": s.indicator, "points": [[str(p), v] for p, v in s.points]}
            for s in series
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_series_csv(text: str) -> list[IndicatorSeries]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SERIES_HEADER:
        raise ValueError(f"expected series header {','.join(SERIES_HEADER)}")
    grouped: dict[tuple[str, str], list] = {}
    for row in reader:
        key = (catalog.resolve_geo(row["geo"]), row["indicator"].strip())
        grouped.setdefault(key, []).append((parse_period(row["period"]), float(row["value"])))
    return [
        IndicatorSeries(geo, ind, tuple(sorted(points, key=lambda pv: pv[0])))
        for (geo, ind), points in sorted(grouped.items())
    ]


def summaries_to_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for r in rows:
        w.writerow([r.geo, r.indicator, _num(r.mean), _num(r.minimum), _num(r.maximum), "" if r.n_obs is None else r.n_obs])
    return buf.getvalue()


def summaries_to_json(rows: Iterable[SummaryRow], config: dict) -> str:
    payload = {
        "config": config,
        "summaries": [
            {"geo": r.geo, "indicator": r.indicator, "mean": r.mean, "min": r.minimum, "max": r.maximum, "n_obs": r.n_obs}
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_summary_csv(text: str) -> list[SummaryRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != SUMMARY_HEADER:
        raise ValueError(f"expected summary header {','.join(SUMMARY_HEADER)}")

    def opt(x: str):
        return float(x) if x.strip() else None

    return [
        SummaryRow(
            catalog.resolve_geo(r["geo"]),
            r["indicator"].strip(),
            float(r["mean"]),
            opt(r["min"]),
            opt(r["max"]),
            int(r["n_obs"]) if r["n_obs"].strip() else None,
        )
        for r in reader
    ]


def ranking_to_csv(table: RankingTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["position", "geo", "name", "mean"])
    for i, (geo, mean) in enumerate(table.entries, start=1):
        name = catalog.GEOS[geo].name if geo in catalog.GEOS else geo
        w.writerow([i, geo, name, _num(mean)])
    return buf.getvalue()


def ranking_to_json(table: RankingTable, config: dict) -> str:
    payload = {
        "config": config,
        "indicator": table.indicator,
        "ranking": [{"position": i, "geo": g, "mean": m} for i, (g, m) in enumerate(table.entries, start=1)],
    }
    return json.dumps(payload, indent=2) + "\n"


def sniff_kind(path: str | os.PathLike) -> str:
    """Classify an input file by its header: observations, series, summary or table."""
    with open(path, encoding="utf-8-sig") as fh:
        header = tuple(h.strip().lower() for h in next(csv.reader(fh), []))
    if header[:4] == ("geo", "survey", "question", "period"):
        return "observations"
    if header == SERIES_HEADER:
        return "series"
    if header == SUMMARY_HEADER:
        return "summary"
    if header[:4] == ("geo", "indicator", "stat", "value"):
        return "table"
    raise ValueError(f"{path}: unrecognised header {','.join(header)}")
