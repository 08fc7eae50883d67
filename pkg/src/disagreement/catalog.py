"""Surveys, questions, geographies and monthly periods."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

SURVEYS = ("INDU", "SERV", "RETA", "BUIL", "CONS")
BUSINESS_SURVEYS = SURVEYS[:4]

CONSUMER_RAW_ARITY = 6


class CatalogError(KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class PeriodParseError(ValueError):
    pass


@dataclass(frozen=True)
class Question:
    code: str
    survey: str
    description: str
    default_arity: int

    @property
    def indicator(self) -> str:
        return f"D_{self.code}"

    @property
    def is_consumer(self) -> bool:
        return self.survey == "CONS"


def _q(code: str, survey: str, description: str) -> Question:
    return Question(code, survey, description, CONSUMER_RAW_ARITY if survey == "CONS" else 3)


_BUILTIN_QUESTIONS = (
    _q("I5", "INDU", "Production expectations for the months ahead"),
    _q("I6", "INDU", "Selling price expectations over the next 3 months"),
    _q("I7", "INDU", "Employment expectations over the next 3 months"),
    _q("S3", "SERV", "Expectation of the demand over the next 3 months"),
    _q("S5", "SERV", "Expectations of the employment over the next 3 months"),
    _q("S6", "SERV", "Expectations of the prices over the next 3 months"),
    _q("R3", "RETA", "Orders expectations over the next 3 months"),
    _q("R4", "RETA", "Business activity expectations over the next 3 months"),
    _q("R5", "RETA", "Employment expectations over the next 3 months"),
    _q("R6", "RETA", "Prices expectations over the next 3 months"),
    _q("B4", "BUIL", "Employment expectations over the next 3 months"),
    _q("B5", "BUIL", "Prices expectations over the next 3 months"),
    _q("C2", "CONS", "Financial situation over next 12 months"),
    _q("C4", "CONS", "General economic situation over next 12 months"),
    _q("C6", "CONS", "Price trends over next 12 months"),
    _q("C7", "CONS", "Unemployment expectations over next 12 months"),
    _q("C9", "CONS", "Major purchases over next 12 months"),
)

QUESTIONS: dict[str, Question] = {q.code: q for q in _BUILTIN_QUESTIONS}
_EXTRA_QUESTIONS: dict[str, Question] = {}


def register_question(code: str, survey: str, description: str = "", arity: int | None = None) -> Question:
    """Add a question for a non-EC dataset. Built-in codes cannot be redefined."""
    if code in QUESTIONS or code in _EXTRA_QUESTIONS:
        raise ValueError(f"question {code!r} already registered")
    if survey not in SURVEYS:
        raise CatalogError(f"unknown survey {survey!r}; expected one of {', '.join(SURVEYS)}")
    if arity is None:
        arity = CONSUMER_RAW_ARITY if survey == "CONS" else 3
    if survey == "CONS" and arity != CONSUMER_RAW_ARITY:
        raise ValueError("consumer questions carry 6 raw categories")
    if survey != "CONS" and arity < 2:
        raise ValueError("arity must be >= 2")
    q = Question(code, survey, description, arity)
    _EXTRA_QUESTIONS[code] = q
    return q


def unregister_question(code: str) -> None:
    _EXTRA_QUESTIONS.pop(code, None)


def question(code: str) -> Question:
    code = code.strip().upper()
    if code.startswith("D_"):
        code = code[2:]
    try:
        return QUESTIONS.get(code) or _EXTRA_QUESTIONS[code]
    except KeyError:
        raise CatalogError(f"unknown question code {code!r}") from None


def questions_of(survey: str) -> list[Question]:
    if survey not in SURVEYS:
        raise CatalogError(f"unknown survey {survey!r}; expected one of {', '.join(SURVEYS)}")
    found = [q for q in QUESTIONS.values() if q.survey == survey]
    found += [q for q in _EXTRA_QUESTIONS.values() if q.survey == survey]
    return found


# -- indicators ---------------------------------------------------------------

SECTOR_INDICATORS = {s: f"D_{s}" for s in SURVEYS}
BUSINESS_SECTORS = tuple(SECTOR_INDICATORS[s] for s in BUSINESS_SURVEYS)
D_CONS = SECTOR_INDICATORS["CONS"]
D_BUSI = "D_BUSI"
D_TOTAL = "D_TOTAL"

QUESTION_INDICATORS = tuple(q.indicator for q in _BUILTIN_QUESTIONS)
INDICATORS = QUESTION_INDICATORS + tuple(SECTOR_INDICATORS.values()) + (D_BUSI, D_TOTAL)


def is_indicator(name: str) -> bool:
    if name in INDICATORS:
        return True
    return name.startswith("D_") and name[2:] in _EXTRA_QUESTIONS


def sector_of_indicator(indicator: str) -> str:
    """Survey code a question-level indicator belongs to."""
    return question(indicator).survey


# -- geographies --------------------------------------------------------------

@dataclass(frozen=True)
class Geo:
    code: str
    name: str
    aggregate: bool = False


GEOS: dict[str, Geo] = {
    g.code: g
    for g in (
        Geo("BE", "Belgium"),
        Geo("BG", "Bulgaria"),
        Geo("CZ", "Czech Rep."),
        Geo("DK", "Denmark"),
        Geo("DE", "Germany"),
        Geo("EE", "Estonia"),
        Geo("IE", "Ireland"),
        Geo("GR", "Greece"),
        Geo("ES", "Spain"),
        Geo("FR", "France"),
        Geo("HR", "Croatia"),
        Geo("IT", "Italy"),
        Geo("CY", "Cyprus"),
        Geo("LV", "Latvia"),
        Geo("LT", "Lithuania"),
        Geo("HU", "Hungary"),
        Geo("MT", "Malta"),
        Geo("NL", "Netherlands"),
        Geo("AT", "Austria"),
        Geo("PL", "Poland"),
        Geo("PT", "Portugal"),
        Geo("RO", "Romania"),
        Geo("SI", "Slovenia"),
        Geo("SK", "Slovakia"),
        Geo("FI", "Finland"),
        Geo("SE", "Sweden"),
        Geo("GB", "United Kingdom"),
        Geo("ME", "Montenegro"),
        Geo("MK", "North Macedonia"),
        Geo("AL", "Albania"),
        Geo("RS", "Serbia"),
        Geo("TR", "Turkey"),
        Geo("EA", "Euro Area", aggregate=True),
        Geo("EU", "European Union", aggregate=True),
    )
}

# EC portal codes and the short names used in published tables
_GEO_ALIASES = {
    "EL": "GR",
    "UK": "GB",
    "EA19": "EA",
    "EU27": "EU",
    "EU28": "EU",
    "CZECHIA": "CZ",
    "CZECH REPUBLIC": "CZ",
    "MACEDONIA": "MK",
    "TÜRKIYE": "TR",
    "TURKIYE": "TR",
    "EURO AREA": "EA",
}
_GEO_BY_NAME = {g.name.upper(): g.code for g in GEOS.values()}


def resolve_geo(text: str) -> str:
    """Canonical geo code for a code, EC alias or country name."""
    key = text.strip().upper()
    if key in GEOS:
        return key
    if key in _GEO_ALIASES:
        return _GEO_ALIASES[key]
    if key in _GEO_BY_NAME:
        return _GEO_BY_NAME[key]
    raise CatalogError(f"unknown geography {text.strip()!r}")


# -- periods ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Period:
    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise PeriodParseError(f"month {self.month} outside 1..12")

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @property
    def ordinal(self) -> int:
        return self.year * 12 + self.month - 1

    @classmethod
    def from_ordinal(cls, n: int) -> "Period":
        return cls(n // 12, n % 12 + 1)

    def shift(self, months: int) -> "Period":
        return Period.from_ordinal(self.ordinal + months)

    def months_until(self, other: "Period") -> int:
        return other.ordinal - self.ordinal


_PERIOD_RE = re.compile(r"^(\d{4})(?:-(\d{1,2})|\.?M(\d{1,2}))$", re.IGNORECASE)


def parse_period(text: str) -> Period:
    """Parse ``YYYY-MM`` or the ``YYYY.Mm`` / ``YYYYMmm`` notation."""
    token = text.strip()
    m = _PERIOD_RE.match(token)
    if not m:
        raise PeriodParseError(f"malformed period {token!r}; expected YYYY-MM")
    month = int(m.group(2) or m.group(3))
    if not 1 <= month <= 12:
        raise PeriodParseError(f"invalid month in period {token!r}")
    return Period(int(m.group(1)), month)


def period_range(start: Period, end: Period) -> Iterator[Period]:
    """Inclusive monthly range."""
    for n in range(start.ordinal, end.ordinal + 1):
        yield Period.from_ordinal(n)
