"""CSV ingestion of survey share data into validated observations.

Accepted layouts (header row required, UTF-8)::

    geo,survey,question,period,up,same,down
    geo,survey,question,period,pp,p,e,m,mm,dk

Rows are read by the arity of their question, so one file may mix business
and consumer rows as long as the header has enough value columns. An
optional ``flag`` column right after ``period`` carries a coverage flag
through a write/read cycle (see :func:`to_csv`).
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping

from disagreement.catalog import (
    CONSUMER_RAW_ARITY,
    CatalogError,
    Period,
    PeriodParseError,
    parse_period,
    period_range,
    question,
    resolve_geo,
)
from disagreement.metrics import SharesVector

RENORMALIZE_TOLERANCE = 0.02
EXACT_TOLERANCE = 1e-9
PERCENT_THRESHOLD = 1.5

KEY_COLUMNS = ("geo", "survey", "question", "period")


class IngestError(ValueError):
    pass


class RowValidationError(IngestError):
    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")


class VocabularyError(IngestError):
    pass


class DuplicateKeyError(IngestError):
    pass


class DegenerateDistributionError(IngestError):
    pass


class DontKnowPolicy(str, enum.Enum):
    DROP = "drop"
    INCLUDE = "include"

    @classmethod
    def parse(cls, value: "str | DontKnowPolicy") -> "DontKnowPolicy":
        if isinstance(value, cls):
            return value
        aliases = {"drop-renormalize": "drop", "include-as-category": "include"}
        return cls(aliases.get(value, value))


class Coverage(str, enum.Enum):
    COMPLETE = "complete"
    RENORMALIZED = "renormalized"
    # never produced by the parser; missing periods stay absent rather than imputed
    IMPUTED_NONE = "imputed-none"


@dataclass(frozen=True)
class Observation:
    geo: str
    question: str
    period: Period
    shares: SharesVector
    coverage: Coverage = Coverage.COMPLETE

    @property
    def key(self) -> tuple[str, str, Period]:
        return (self.geo, self.question, self.period)


def effective_arity(question_code: str, policy: DontKnowPolicy) -> int:
    q = question(question_code)
    if q.is_consumer and policy is DontKnowPolicy.DROP:
        return CONSUMER_RAW_ARITY - 1
    return q.default_arity


def apply_dont_know_policy(raw: SharesVector, policy: "DontKnowPolicy | str") -> SharesVector:
    """Drop the trailing don't-know share and rescale, or keep all six categories."""
    policy = DontKnowPolicy.parse(policy)
    if raw.arity != CONSUMER_RAW_ARITY:
        raise ValueError(
            f"don't-know policy applies to raw 6-category consumer shares, got arity {raw.arity}"
        )
    if policy is DontKnowPolicy.INCLUDE:
        return raw
    substantive = raw.shares[:-1]
    if math.fsum(substantive) <= 0.0:
        raise DegenerateDistributionError("every respondent answered don't know")
    return SharesVector.normalized(substantive)


@dataclass(frozen=True)
class Dataset:
    observations: Mapping[tuple[str, str, Period], Observation]
    provenance: str = ""
    policy: DontKnowPolicy = DontKnowPolicy.DROP
    tolerance: float = RENORMALIZE_TOLERANCE

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list[Observation]:
        return [self.observations[k] for k in sorted(self.observations)]

    @property
    def geos(self) -> list[str]:
        return sorted({k[0] for k in self.observations})

    @property
    def questions(self) -> list[str]:
        return sorted({k[1] for k in self.observations})

    @property
    def periods(self) -> list[Period]:
        return sorted({k[2] for k in self.observations})

    def series_keys(self) -> list[tuple[str, str]]:
        return sorted({(k[0], k[1]) for k in self.observations})

    def for_series(self, geo: str, question_code: str) -> list[Observation]:
        return sorted(
            (o for k, o in self.observations.items() if k[0] == geo and k[1] == question_code),
            key=lambda o: o.period,
        )

    def restrict(self, start: Period | None = None, end: Period | None = None) -> "Dataset":
        keep = {
            k: o
            for k, o in self.observations.items()
            if (start is None or k[2] >= start) and (end is None or k[2] <= end)
        }
        return Dataset(keep, self.provenance, self.policy, self.tolerance)

    def select_geos(self, geos: Iterable[str]) -> "Dataset":
        wanted = {resolve_geo(g) for g in geos}
        keep = {k: o for k, o in self.observations.items() if k[0] in wanted}
        return Dataset(keep, self.provenance, self.policy, self.tolerance)

    def merge(self, other: "Dataset") -> "Dataset":
        """Union of two datasets with disjoint keys; the result does not depend on argument order."""
        if self.policy is not other.policy:
            raise IngestError("cannot merge datasets built with different don't-know policies")
        clash = set(self.observations) & set(other.observations)
        if clash:
            g, q, p = min(clash)
            raise DuplicateKeyError(f"duplicate observation {g},{q},{p} across merged datasets")
        obs = dict(self.observations)
        obs.update(other.observations)
        prov = ";".join(sorted(filter(None, {*self.provenance.split(";"), *other.provenance.split(";")})))
        return Dataset(obs, prov, self.policy, max(self.tolerance, other.tolerance))


def _parse_number(text: str, row: int) -> float:
    try:
        value = float(text.strip().replace(",", "."))
    except ValueError:
        raise RowValidationError(row, f"non-numeric share {text!r}") from None
    if math.isnan(value) or math.isinf(value):
        raise RowValidationError(row, f"non-finite share {text!r}")
    if value < 0:
        raise RowValidationError(row, f"negative share {text!r}")
    return value


def parse_csv(
    stream: "IO[str] | IO[bytes] | str",
    policy: "DontKnowPolicy | str" = DontKnowPolicy.DROP,
    tolerance: float = RENORMALIZE_TOLERANCE,
    provenance: str = "",
) -> Dataset:
    """Parse one CSV file of response shares.

    Percentages vs fractions are detected once per file: any value above 1.5
    means the whole file is in percent. Rows whose raw sum is within
    ``tolerance`` (relative) of the denominator are rescaled to one and
    flagged ``renormalized``.
    """
    policy = DontKnowPolicy.parse(policy)
    if isinstance(stream, str):
        text = stream
    else:
        data = stream.read()
        text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        raise IngestError("empty input: missing header row") from None
    if tuple(header[:4]) != KEY_COLUMNS:
        raise IngestError(f"header must start with {','.join(KEY_COLUMNS)}, got {','.join(header[:4])}")
    has_flag = len(header) > 4 and header[4] == "flag"
    first_value = 5 if has_flag else 4

    # first pass: tokenize and validate vocabulary; values kept raw for unit detection
    rows: list[tuple[int, str, str, Period, Coverage | None, list[float]]] = []
    for lineno, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) < first_value:
            raise RowValidationError(lineno, f"expected at least {first_value} columns, got {len(fields)}")
        geo_txt, survey_txt, q_txt, period_txt = (f.strip() for f in fields[:4])
        try:
            geo = resolve_geo(geo_txt)
            q = question(q_txt)
        except CatalogError as exc:
            raise VocabularyError(f"row {lineno}: {exc}") from None
        if survey_txt.upper() != q.survey:
            raise VocabularyError(f"row {lineno}: question {q.code} belongs to {q.survey}, not {survey_txt!r}")
        try:
            period = parse_period(period_txt)
        except PeriodParseError as exc:
            raise RowValidationError(lineno, str(exc)) from None
        flag = None
        if has_flag and fields[4].strip():
            try:
                flag = Coverage(fields[4].strip())
            except ValueError:
                raise RowValidationError(lineno, f"unknown coverage flag {fields[4]!r}") from None
        raw = fields[first_value:]
        while raw and not raw[-1].strip():
            raw.pop()
        if len(raw) != q.default_arity:
            raise RowValidationError(
                lineno, f"question {q.code} needs {q.default_arity} shares, got {len(raw)}"
            )
        values = [_parse_number(v, lineno) for v in raw]
        rows.append((lineno, geo, q.code, period, flag, values))

    percent = any(v > PERCENT_THRESHOLD for r in rows for v in r[5])
    denominator = 100.0 if percent else 1.0

    observations: dict[tuple[str, str, Period], Observation] = {}
    for lineno, geo, code, period, flag, values in rows:
        total = math.fsum(values)
        if abs(total - denominator) > tolerance * denominator:
            raise RowValidationError(
                lineno, f"shares sum to {total:g}, outside {denominator:g} ± {tolerance:.0%}"
            )
        exact = abs(total - denominator) <= EXACT_TOLERANCE * denominator
        coverage = flag or (Coverage.COMPLETE if exact else Coverage.RENORMALIZED)
        shares = SharesVector.normalized(values)
        if question(code).is_consumer:
            try:
                shares = apply_dont_know_policy(shares, policy)
            except DegenerateDistributionError as exc:
                raise RowValidationError(lineno, str(exc)) from None
        key = (geo, code, period)
        if key in observations:
            raise DuplicateKeyError(f"row {lineno}: duplicate observation {geo},{code},{period}")
        observations[key] = Observation(geo, code, period, shares, coverage)
    return Dataset(observations, provenance, policy, tolerance)


def read_csv(path, policy: "DontKnowPolicy | str" = DontKnowPolicy.DROP, tolerance: float = RENORMALIZE_TOLERANCE) -> Dataset:
    with open(path, "rb") as fh:
        return parse_csv(fh, policy, tolerance, provenance=str(path))


def to_csv(dataset: Dataset) -> str:
    """Serialize processed observations as fractions, one row per observation.

    Consumer rows processed with the drop policy are written with a zero
    don't-know share so re-parsing under the same policy is lossless.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*KEY_COLUMNS, "flag", "c1", "c2", "c3", "c4", "c5", "c6"])
    for obs in dataset:
        q = question(obs.question)
        values = list(obs.shares.shares)
        if q.is_consumer and len(values) == CONSUMER_RAW_ARITY - 1:
            values.append(0.0)
        w.writerow([obs.geo, q.survey, q.code, str(obs.period), obs.coverage.value, *(repr(v) for v in values)])
    return buf.getvalue()


@dataclass(frozen=True)
class Gap:
    geo: str
    question: str
    first: Period
    last: Period
    missing: tuple[Period, ...] = field(default=())

    @property
    def n_missing(self) -> int:
        return len(self.missing)


def missing_report(dataset: Dataset, start: Period, end: Period) -> list[Gap]:
    """Every (geo, question) series lacking at least one month in ``start..end``.

    ``first``/``last`` are the first and last available periods in the whole dataset.
    """
    expected = list(period_range(start, end))
    gaps = []
    for geo, code in dataset.series_keys():
        present = {o.period for o in dataset.for_series(geo, code)}
        missing = tuple(p for p in expected if p not in present)
        if missing:
            gaps.append(Gap(geo, code, min(present), max(present), missing))
    return gaps
