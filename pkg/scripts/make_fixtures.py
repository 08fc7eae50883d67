#!/usr/bin/env python
"""Regenerate the synthetic share files in tests/fixtures/.

panel.csv        BE and EU, all 17 questions, 2020-04..2020-06, percentages at one decimal
belgium_means.csv  BE, one month, each question's shares placed at its published average
"""

import argparse
import csv
from pathlib import Path

from disagreement import catalog
from disagreement.metrics import point_at_discrepancy
from disagreement.tables import load_table_fixture

OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def raw_shares(q: catalog.Question, level: float, towards: int) -> list[float]:
    if q.is_consumer:
        # five substantive answers plus a fixed 4% don't-know
        s = point_at_discrepancy(level, 5, towards % 5).shares
        return [x * 0.96 for x in s] + [0.04]
    return list(point_at_discrepancy(level, 3, towards % 3).shares)


def write_panel(path: Path) -> None:
    table = load_table_fixture()
    periods = [catalog.Period(2020, m) for m in (4, 5, 6)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["geo", "survey", "question", "period", "pp", "p", "e", "m", "mm", "dk"])
        for geo in ("BE", "EU"):
            for i, q in enumerate(catalog.QUESTIONS.values()):
                for k, p in enumerate(periods):
                    level = min(0.98, table.get(geo, q.indicator) + 0.03 * (k - 1))
                    values = [f"{100 * x:.1f}" for x in raw_shares(q, level, i + k)]
                    w.writerow([geo, q.survey, q.code, str(p), *values])


def write_belgium(path: Path) -> None:
    table = load_table_fixture()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["geo", "survey", "question", "period", "pp", "p", "e", "m", "mm", "dk"])
        for i, q in enumerate(catalog.QUESTIONS.values()):
            level = table.get("BE", q.indicator)
            if q.is_consumer:
                values = list(point_at_discrepancy(level, 5, i % 5).shares) + [0.0]
            else:
                values = list(point_at_discrepancy(level, 3, i % 3).shares)
            w.writerow(["BE", q.survey, q.code, "2020-01", *(repr(v) for v in values)])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    write_panel(args.out / "panel.csv")
    write_belgium(args.out / "belgium_means.csv")


if __name__ == "__main__":
    main()
