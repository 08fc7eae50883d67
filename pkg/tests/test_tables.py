import pytest

from disagreement import catalog
from disagreement.tables import (
    TableFormatError,
    composite_checks,
    load_table_fixture,
    parse_table_fixture,
)


@pytest.fixture(scope="module")
def table():
    return load_table_fixture()


def test_bundled_table_shape(table):
    assert len(table.geos) == 34
    means = [k for k in table.values if k[2] == "mean"]
    assert len(means) == 34 * 24
    assert len([k for k in table.values if k[2] == "min"]) == 34 * 18


@pytest.mark.parametrize(
    "geo, indicator, stat, value",
    [
        ("BE", "D_I5", "mean", 0.455),
        ("TR", "D_BUSI", "mean", 0.570),
        ("GB", "D_C2", "max", 0.926),
        ("CY", "D_I7", "min", 0.000),
        ("EU", "D_S5", "mean", 0.271),
    ],
)
def test_spot_values(table, geo, indicator, stat, value):
    assert table.get(geo, indicator, stat) == value


def test_decimal_comma_and_names():
    text = 'geo,indicator,stat,value\nBelgium,D_I5,mean,"0,455"\nUK,D_I5,min,0,331\nEL,D_I5,max,0.9\n'
    t = parse_table_fixture(text)
    assert t.get("BE", "D_I5") == 0.455
    assert t.get("GB", "D_I5", "min") == 0.331
    assert t.get("GR", "D_I5", "max") == 0.9


@pytest.mark.parametrize(
    "row",
    ["BE,D_X9,mean,0.1", "BE,D_I5,median,0.1", "BE,D_I5,mean,abc", "BE,D_I5,mean,0.1,extra,x"],
)
def test_bad_rows(row):
    with pytest.raises(TableFormatError):
        parse_table_fixture("geo,indicator,stat,value\n" + row + "\n")


def test_anomalies_are_visible(table):
    # printed means outside their own min/max
    bad = table.inconsistent_summaries()
    assert ("ME", "D_I6") in bad
    assert ("EU", "D_S5") in bad
    with pytest.raises(Exception):
        table.summary_rows("D_I6", with_extremes=True)
    assert len(table.summary_rows("D_I6")) == 34


def test_composite_checks_cover_every_composite(table):
    checks = composite_checks(table, "BE")
    assert sorted(c.indicator for c in checks) == sorted(
        list(catalog.SECTOR_INDICATORS.values()) + ["D_BUSI", "D_TOTAL"]
    )
    assert all(c.ok for c in checks)


def test_eu_service_flagged(table):
    (check,) = [c for c in composite_checks(table, "EU") if c.indicator == "D_SERV"]
    assert check.known_anomaly and not check.ok
