import pytest
from hypothesis import given
from hypothesis import strategies as st

from disagreement import catalog
from disagreement.catalog import Period, PeriodParseError, parse_period, period_range, questions_of


@pytest.mark.parametrize(
    "survey, codes",
    [
        ("INDU", ["I5", "I6", "I7"]),
        ("SERV", ["S3", "S5", "S6"]),
        ("RETA", ["R3", "R4", "R5", "R6"]),
        ("BUIL", ["B4", "B5"]),
        ("CONS", ["C2", "C4", "C6", "C7", "C9"]),
    ],
)
def test_questions_of(survey, codes):
    assert [q.code for q in questions_of(survey)] == codes


def test_question_catalog_shape():
    assert len(catalog.QUESTIONS) == 17
    assert [len(questions_of(s)) for s in catalog.SURVEYS] == [3, 3, 4, 2, 5]
    for q in catalog.QUESTIONS.values():
        assert q.default_arity == (6 if q.survey == "CONS" else 3)


def test_indicator_catalog_has_24_ids():
    assert len(catalog.INDICATORS) == 24
    assert len(set(catalog.INDICATORS)) == 24


def test_geo_catalog():
    assert len(catalog.GEOS) == 34
    assert {g.code for g in catalog.GEOS.values() if g.aggregate} == {"EU", "EA"}


@pytest.mark.parametrize(
    "text, code",
    [("BE", "BE"), ("uk", "GB"), ("EL", "GR"), ("United Kingdom", "GB"), ("Czech Rep.", "CZ"),
     ("Macedonia", "MK"), ("Euro Area", "EA"), ("European Union", "EU")],
)
def test_resolve_geo(text, code):
    assert catalog.resolve_geo(text) == code


def test_resolve_geo_unknown():
    with pytest.raises(catalog.CatalogError, match="XX"):
        catalog.resolve_geo("XX")


@pytest.mark.parametrize(
    "text, period",
    [("2020-06", Period(2020, 6)), ("2016.M5", Period(2016, 5)), ("2019M11", Period(2019, 11)), ("2020-1", Period(2020, 1))],
)
def test_parse_period(text, period):
    assert parse_period(text) == period


@pytest.mark.parametrize("bad", ["2020-13", "2020-00", "20-01", "2020/06", "", "2020.M13"])
def test_parse_period_errors(bad):
    with pytest.raises(PeriodParseError):
        parse_period(bad)


def test_parse_period_error_names_token():
    with pytest.raises(PeriodParseError, match="2020-13"):
        parse_period("2020-13")


@given(st.integers(1900, 2200), st.integers(1, 12))
def test_period_format_roundtrip(y, m):
    p = Period(y, m)
    assert parse_period(str(p)) == p
    assert Period.from_ordinal(p.ordinal) == p


@given(st.tuples(st.integers(1990, 2030), st.integers(1, 12)), st.tuples(st.integers(1990, 2030), st.integers(1, 12)))
def test_period_order_is_lexicographic(a, b):
    assert (Period(*a) < Period(*b)) == (a < b)


def test_period_range_inclusive():
    r = list(period_range(Period(2019, 11), Period(2020, 2)))
    assert [str(p) for p in r] == ["2019-11", "2019-12", "2020-01", "2020-02"]


def test_register_extra_question():
    q = catalog.register_question("X1", "INDU", "custom", 4)
    try:
        assert "X1" in [x.code for x in questions_of("INDU")]
        assert catalog.question("D_X1") is q
        assert catalog.is_indicator("D_X1")
        with pytest.raises(ValueError):
            catalog.register_question("I5", "INDU")
    finally:
        catalog.unregister_question("X1")
    assert not catalog.is_indicator("D_X1")
