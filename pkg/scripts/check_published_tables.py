#!/usr/bin/env python
"""Recompute every composite average in the bundled tables and list mismatches."""

import argparse

from disagreement.tables import composite_checks, load_table_fixture


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--table", help="fixture file (default: bundled tables)")
    ap.add_argument("--all", action="store_true", help="print every check, not only mismatches")
    args = ap.parse_args()

    table = load_table_fixture(args.table)
    n = bad = 0
    for geo in table.geos:
        for c in composite_checks(table, geo):
            n += 1
            if not c.ok:
                bad += 1
            if args.all or not c.ok:
                tag = "ok " if c.ok else ("ANOM" if c.known_anomaly else "FAIL")
                print(f"{tag} {geo:3s} {c.indicator:8s} recomputed={c.recomputed:.4f} published={c.published:.3f} err={c.error:.4f}")
    print(f"{n - bad}/{n} composites within ±{0.0015}")
    for geo, ind in table.inconsistent_summaries():
        print(f"mean outside [min, max]: {geo} {ind}")


if __name__ == "__main__":
    main()
