"""Batch command line: validate, compute, summarize, rank, plot, simulate.

Exit status: 0 on success, 1 when input data fails validation, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from disagreement import aggregate, catalog, ingest, plotting, simulate, tables
from disagreement.aggregate import IndicatorSeries, SummaryRow
from disagreement.outputs import (
    parse_series_csv,
    parse_summary_csv,
    ranking_to_csv,
    ranking_to_json,
    series_to_csv,
    series_to_json,
    sniff_kind,
    summaries_to_csv,
    summaries_to_json,
    write_text_atomic,
)

log = logging.getLogger("disagreement")

FORMATS = ("csv", "json", "svg")
RANKABLE = tuple(catalog.SECTOR_INDICATORS.values()) + (catalog.D_BUSI, catalog.D_TOTAL)

LEVELS = {
    "question": set(catalog.QUESTION_INDICATORS),
    "sector": set(catalog.BUSINESS_SECTORS),
    "consumer": {catalog.D_CONS},
    "business": {catalog.D_BUSI},
    "total": {catalog.D_TOTAL},
}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: list[Path] = field(default_factory=list)
    start: catalog.Period | None = None
    end: catalog.Period | None = None
    policy: ingest.DontKnowPolicy = ingest.DontKnowPolicy.DROP
    tolerance: float = ingest.RENORMALIZE_TOLERANCE
    out: Path = Path("out")
    formats: tuple[str, ...] = ("csv",)
    geos: list[str] | None = None
    indicators: list[str] | None = None
    stamp: bool = False

    def as_dict(self) -> dict:
        return {
            "inputs": [str(p) for p in self.inputs],
            "from": str(self.start) if self.start else None,
            "to": str(self.end) if self.end else None,
            "dk_policy": self.policy.value,
            "tolerance": self.tolerance,
            "geos": self.geos,
            "indicators": self.indicators,
        }


def _formats(text: str) -> tuple[str, ...]:
    fmts = tuple(f.strip().lower() for f in text.split(",") if f.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise argparse.ArgumentTypeError(f"formats must be a comma list of {','.join(FORMATS)}")
    return fmts


def _period(text: str) -> catalog.Period:
    try:
        return catalog.parse_period(text)
    except catalog.PeriodParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", nargs="+", default=[], type=Path, metavar="PATH")
    common.add_argument("--from", dest="start", type=_period, metavar="YYYY-MM")
    common.add_argument("--to", dest="end", type=_period, metavar="YYYY-MM")
    common.add_argument("--dk-policy", choices=("drop", "include"), default="drop")
    common.add_argument("--tolerance", type=float, default=ingest.RENORMALIZE_TOLERANCE,
                        help="relative tolerance on raw share sums (default 0.02)")
    common.add_argument("--geo", nargs="+", metavar="CODE")
    common.add_argument("--indicator", nargs="+", metavar="ID")
    common.add_argument("--format", dest="formats", type=_formats, default=("csv",))
    common.add_argument("--out", type=Path, default=Path("out"))
    common.add_argument("--stamp", action="store_true", help="record a timestamp in run_metadata.json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="disagreement", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="parse inputs and report gaps")
    sub.add_parser("compute", parents=[common], help="write indicator series")
    sub.add_parser("summarize", parents=[common], help="mean/min/max per geo and indicator")
    rk = sub.add_parser("rank", parents=[common], help="rank geos by average disagreement")
    rk.add_argument("--published", action="store_true", help="rank the bundled published averages")
    pl = sub.add_parser("plot", parents=[common], help="write SVG charts")
    pl.add_argument("--question-geo", metavar="CODE", help="geo for per-question charts (default EU)")
    pl.add_argument("--reference-geo", default="EU", metavar="CODE")
    sm = sub.add_parser("simulate", parents=[common], help="Monte Carlo dispersion vs discrepancy")
    sm.add_argument("--seed", type=_u64, default=0)
    sm.add_argument("--samples", type=int, default=100_000)
    sm.add_argument("--arity", type=int, default=3)
    sm.add_argument("--sampler", choices=simulate.SAMPLERS, default="uniform")
    sm.add_argument("--alpha", type=float, nargs="+")
    sm.add_argument("--workers", type=int, default=1)
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    for path in args.input:
        if not path.is_file():
            raise DataError(f"cannot read input {path}")
    if args.start and args.end and args.start > args.end:
        raise UsageError(f"--from {args.start} is after --to {args.end}")
    geos = None
    if args.geo:
        try:
            geos = [catalog.resolve_geo(g) for g in args.geo]
        except catalog.CatalogError as exc:
            raise UsageError(str(exc)) from None
    if args.indicator:
        unknown = [i for i in args.indicator if not catalog.is_indicator(i)]
        if unknown:
            raise UsageError(
                f"unknown indicator(s) {', '.join(unknown)}; valid ids: {', '.join(catalog.INDICATORS)}"
            )
    return RunConfig(
        inputs=list(args.input),
        start=args.start,
        end=args.end,
        policy=ingest.DontKnowPolicy.parse(args.dk_policy),
        tolerance=args.tolerance,
        out=args.out,
        formats=args.formats,
        geos=geos,
        indicators=list(args.indicator) if args.indicator else None,
        stamp=args.stamp,
    )


def _write_metadata(cfg: RunConfig, command: str, outputs: list[str], extra: dict | None = None) -> None:
    meta = {"command": command, "config": cfg.as_dict(), "outputs": sorted(outputs)}
    if extra:
        meta.update(extra)
    if cfg.stamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    write_text_atomic(cfg.out / "run_metadata.json", json.dumps(meta, indent=2) + "\n")


def load_dataset(cfg: RunConfig, paths: list[Path] | None = None) -> ingest.Dataset:
    paths = cfg.inputs if paths is None else paths
    dataset = ingest.Dataset({}, "", cfg.policy, cfg.tolerance)
    for path in paths:
        try:
            dataset = dataset.merge(ingest.read_csv(path, cfg.policy, cfg.tolerance))
        except ingest.IngestError as exc:
            raise DataError(f"{path}: {exc}") from None
    dataset = dataset.restrict(cfg.start, cfg.end)
    if cfg.geos:
        dataset = dataset.select_geos(cfg.geos)
    return dataset


def _split_inputs(cfg: RunConfig) -> dict[str, list[Path]]:
    kinds: dict[str, list[Path]] = {}
    for path in cfg.inputs:
        try:
            kinds.setdefault(sniff_kind(path), []).append(path)
        except (ValueError, StopIteration) as exc:
            raise DataError(str(exc)) from None
    return kinds


def load_series(cfg: RunConfig) -> dict[str, dict[str, IndicatorSeries]]:
    """Indicator series per geo from observation files and/or series files."""
    kinds = _split_inputs(cfg)
    other = set(kinds) - {"observations", "series"}
    if other:
        raise DataError(f"expected observation or series files, got {', '.join(sorted(other))} input")
    result: dict[str, dict[str, IndicatorSeries]] = {}
    if "observations" in kinds:
        result = aggregate.build_all(load_dataset(cfg, kinds["observations"]))
    for path in kinds.get("series", []):
        try:
            parsed = parse_series_csv(path.read_text(encoding="utf-8-sig"))
        except (ValueError, KeyError) as exc:
            raise DataError(f"{path}: {exc}") from None
        for s in parsed:
            if cfg.geos and s.geo not in cfg.geos:
                continue
            pts = tuple(
                (p, v) for p, v in s.points
                if (cfg.start is None or p >= cfg.start) and (cfg.end is None or p <= cfg.end)
            )
            if not pts:
                continue
            per_geo = result.setdefault(s.geo, {})
            if s.indicator in per_geo:
                raise DataError(f"{path}: duplicate series {s.geo}/{s.indicator}")
            per_geo[s.indicator] = IndicatorSeries(s.geo, s.indicator, pts)
    return result


def _selected(cfg: RunConfig, indicator: str) -> bool:
    return cfg.indicators is None or indicator in cfg.indicators


def _ordered(all_series: dict[str, dict[str, IndicatorSeries]], cfg: RunConfig) -> list[IndicatorSeries]:
    order = {ind: i for i, ind in enumerate(catalog.INDICATORS)}
    out = []
    for geo in sorted(all_series):
        for ind in sorted(all_series[geo], key=lambda i: (order.get(i, len(order)), i)):
            if _selected(cfg, ind):
                out.append(all_series[geo][ind])
    return out


# -- commands -----------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    dataset = load_dataset(cfg)
    flags: dict[str, int] = {}
    for o in dataset:
        flags[o.coverage.value] = flags.get(o.coverage.value, 0) + 1
    print(f"{len(dataset)} observations, {len(dataset.geos)} geos, {len(dataset.questions)} questions")
    for flag, n in sorted(flags.items()):
        print(f"  {flag}: {n}")
    if not len(dataset):
        return 0
    start = cfg.start or dataset.periods[0]
    end = cfg.end or dataset.periods[-1]
    gaps = ingest.missing_report(dataset, start, end)
    for g in gaps:
        print(f"gap {g.geo} {g.question}: {g.n_missing} missing month(s) in {start}..{end}, "
              f"available {g.first}..{g.last}")
    return 0


def cmd_compute(cfg: RunConfig) -> int:
    all_series = load_series(cfg)
    series = _ordered(all_series, cfg)
    if not series:
        log.warning("no series to write")
    written = []
    config = cfg.as_dict()
    for level, members in LEVELS.items():
        chunk = [s for s in series if s.indicator in members]
        if not chunk:
            continue
        if "csv" in cfg.formats:
            write_text_atomic(cfg.out / f"series_{level}.csv", series_to_csv(chunk))
            written.append(f"series_{level}.csv")
        if "json" in cfg.formats:
            write_text_atomic(cfg.out / f"series_{level}.json", series_to_json(chunk, config))
            written.append(f"series_{level}.json")
    _write_metadata(cfg, "compute", written)
    n_geo = len({s.geo for s in series})
    print(f"wrote {len(series)} series for {n_geo} geo(s) to {cfg.out}")
    return 0


def _summaries(cfg: RunConfig) -> list[SummaryRow]:
    return [aggregate.summarize(s) for s in _ordered(load_series(cfg), cfg) if len(s)]


def cmd_summarize(cfg: RunConfig) -> int:
    rows = _summaries(cfg)
    written = []
    if "csv" in cfg.formats:
        write_text_atomic(cfg.out / "summary.csv", summaries_to_csv(rows))
        written.append("summary.csv")
    if "json" in cfg.formats:
        write_text_atomic(cfg.out / "summary.json", summaries_to_json(rows, cfg.as_dict()))
        written.append("summary.json")
    _write_metadata(cfg, "summarize", written)
    print(f"summarized {len(rows)} series")
    return 0


def cmd_rank(cfg: RunConfig, published: bool = False) -> int:
    rows: list[SummaryRow] = []
    fixtures: list[tables.TableFixture] = [tables.load_table_fixture()] if published else []
    kinds = _split_inputs(cfg)
    for path in kinds.pop("table", []):
        try:
            fixtures.append(tables.load_table_fixture(path))
        except (tables.TableFormatError, catalog.CatalogError) as exc:
            raise DataError(f"{path}: {exc}") from None
    for path in kinds.pop("summary", []):
        try:
            rows.extend(parse_summary_csv(path.read_text(encoding="utf-8-sig")))
        except (ValueError, KeyError) as exc:
            raise DataError(f"{path}: {exc}") from None
    if kinds:
        sub = RunConfig(**{**cfg.__dict__, "inputs": [p for ps in kinds.values() for p in ps]})
        rows.extend(_summaries(sub))
    for fx in fixtures:
        for ind in RANKABLE + catalog.QUESTION_INDICATORS:
            rows.extend(fx.summary_rows(ind))
    if cfg.geos:
        rows = [r for r in rows if r.geo in cfg.geos]
    wanted = cfg.indicators or [i for i in RANKABLE if any(r.indicator == i for r in rows)]
    written = []
    for ind in wanted:
        subset = [r for r in rows if r.indicator == ind]
        if not subset:
            log.warning("no values for %s; skipped", ind)
            continue
        try:
            table = aggregate.rank(subset)
        except aggregate.AggregationError as exc:
            raise DataError(f"{ind}: {exc}") from None
        if "csv" in cfg.formats:
            write_text_atomic(cfg.out / f"ranking_{ind}.csv", ranking_to_csv(table))
            written.append(f"ranking_{ind}.csv")
        if "json" in cfg.formats:
            write_text_atomic(cfg.out / f"ranking_{ind}.json", ranking_to_json(table, cfg.as_dict()))
            written.append(f"ranking_{ind}.json")
        print(f"{ind}: {' < '.join(table.geos)}")
    _write_metadata(cfg, "rank", written)
    return 0


def cmd_plot(cfg: RunConfig, question_geo: str | None = None, reference_geo: str | None = "EU") -> int:
    all_series = load_series(cfg)
    written: list[str] = []
    if not all_series:
        log.warning("no series to plot; no SVG written")
        _write_metadata(cfg, "plot", written)
        return 0
    reference = None
    if reference_geo:
        ref_code = catalog.resolve_geo(reference_geo)
        reference = all_series.get(ref_code, {}).get(catalog.D_BUSI)
        if reference is None:
            log.warning("reference business series for %s not available", ref_code)

    def emit(name: str, svg: str | None, what: str) -> None:
        if svg is None:
            log.warning("%s: empty series; skipped", what)
            return
        write_text_atomic(cfg.out / name, svg)
        written.append(name)

    for geo in sorted(all_series):
        ind = all_series[geo]
        emit(f"sectors_{geo}.svg", plotting.sector_chart(geo, ind), f"sector chart {geo}")
        ref = reference if reference is not None and reference.geo != geo else None
        emit(f"business_consumer_{geo}.svg", plotting.business_consumer_chart(geo, ind, ref), f"business/consumer chart {geo}")
    qgeo = catalog.resolve_geo(question_geo) if question_geo else ("EU" if "EU" in all_series else sorted(all_series)[0])
    if qgeo in all_series:
        for survey in catalog.SURVEYS:
            emit(f"questions_{qgeo}_{survey}.svg", plotting.question_chart(qgeo, survey, all_series[qgeo]),
                 f"{survey} question chart {qgeo}")
    else:
        log.warning("no series for question-chart geo %s", qgeo)
    _write_metadata(cfg, "plot", written)
    print(f"wrote {len(written)} SVG file(s) to {cfg.out}")
    return 0


def cmd_simulate(cfg: RunConfig, sim: simulate.SimulationConfig, workers: int = 1) -> int:
    report = simulate.compare(sim, workers=workers)
    payload = {"config": sim.as_dict(), "report": report.as_dict()}
    write_text_atomic(cfg.out / "simulation_report.json", json.dumps(payload, indent=2) + "\n")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["disp", "d"])
    for a, b in zip(report.disp.tolist(), report.d.tolist()):
        w.writerow([repr(a), repr(b)])
    write_text_atomic(cfg.out / "simulation_samples.csv", buf.getvalue())
    _write_metadata(cfg, "simulate", ["simulation_report.json", "simulation_samples.csv"],
                    {"simulation": sim.as_dict()})
    r = report
    print(f"pearson={r.pearson_correlation:.4f} spearman={r.spearman_correlation:.4f} "
          f"mean_disp={r.mean_disp:.4f} mean_d={r.mean_d:.4f} share_disp_greater={r.share_disp_greater:.4f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _config(args)
        if args.command != "simulate" and not (cfg.inputs or getattr(args, "published", False)):
            raise UsageError("--input is required")
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "compute":
            return cmd_compute(cfg)
        if args.command == "summarize":
            return cmd_summarize(cfg)
        if args.command == "rank":
            return cmd_rank(cfg, published=args.published)
        if args.command == "plot":
            return cmd_plot(cfg, args.question_geo, args.reference_geo)
        if args.command == "simulate":
            try:
                sim = simulate.SimulationConfig(
                    sample_count=args.samples,
                    arity=args.arity,
                    seed=args.seed,
                    sampler=args.sampler,
                    alpha=tuple(args.alpha) if args.alpha else None,
                )
            except simulate.SimulationConfigError as exc:
                raise UsageError(str(exc)) from None
            if sim.arity != 3:
                raise UsageError(f"simulate compares dispersion and discrepancy at arity 3 only, got {sim.arity}")
            return cmd_simulate(cfg, sim, args.workers)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataError, catalog.CatalogError, aggregate.AggregationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser.error(f"unknown command {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
