import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from disagreement import catalog
from disagreement.catalog import Period
from disagreement.ingest import (
    Coverage,
    DegenerateDistributionError,
    DontKnowPolicy,
    DuplicateKeyError,
    RowValidationError,
    VocabularyError,
    apply_dont_know_policy,
    missing_report,
    parse_csv,
    to_csv,
)
from disagreement.metrics import SharesVector

BUSINESS_HEADER = "geo,survey,question,period,up,same,down\n"
CONSUMER_HEADER = "geo,survey,question,period,pp,p,e,m,mm,dk\n"


def test_percent_row_is_renormalized():
    d = parse_csv(BUSINESS_HEADER + "BE,INDU,I5,2020-03,33.3,33.3,33.4\n")
    obs = d.observations[("BE", "I5", Period(2020, 3))]
    assert obs.shares.shares == pytest.approx((0.333, 0.333, 0.334), abs=1e-12)
    assert obs.coverage is Coverage.COMPLETE


def test_rounded_percent_row_flagged_renormalized():
    d = parse_csv(BUSINESS_HEADER + "BE,INDU,I5,2020-03,33.3,33.3,33.3\n")
    obs = d.observations[("BE", "I5", Period(2020, 3))]
    assert obs.shares.shares == pytest.approx((1 / 3,) * 3, abs=1e-12)
    assert obs.coverage is Coverage.RENORMALIZED


def test_sum_outside_tolerance():
    with pytest.raises(RowValidationError) as exc:
        parse_csv(BUSINESS_HEADER + "BE,INDU,I5,2020-03,50,50,0\nBE,INDU,I6,2020-03,30,30,30\n")
    assert exc.value.row == 3


def test_bytes_stream_and_bom():
    d = parse_csv(io.BytesIO(("﻿" + BUSINESS_HEADER + "BE,INDU,I5,2020-03,0.2,0.5,0.3\n").encode()))
    assert len(d) == 1


def test_fraction_file_detected():
    d = parse_csv(BUSINESS_HEADER + "BE,INDU,I5,2020-03,0.2,0.5,0.3\nBE,INDU,I6,2020-03,0.1,0.8,0.1\n")
    assert d.observations[("BE", "I5", Period(2020, 3))].shares.shares == pytest.approx((0.2, 0.5, 0.3))


def test_consumer_drop_policy():
    d = parse_csv(CONSUMER_HEADER + "BE,CONS,C6,2020-03,5,20,40,20,10,5\n", DontKnowPolicy.DROP)
    obs = d.observations[("BE", "C6", Period(2020, 3))]
    assert obs.shares.arity == 5
    assert obs.shares.shares == pytest.approx(tuple(x / 95 for x in (5, 20, 40, 20, 10)), abs=1e-12)


def test_consumer_include_policy():
    d = parse_csv(CONSUMER_HEADER + "BE,CONS,C6,2020-03,5,20,40,20,10,5\n", "include")
    assert d.observations[("BE", "C6", Period(2020, 3))].shares.arity == 6


def test_mixed_business_and_consumer_rows():
    text = CONSUMER_HEADER + "BE,INDU,I5,2020-03,20,50,30,,,\nBE,CONS,C2,2020-03,5,20,40,20,10,5\n"
    d = parse_csv(text)
    assert len(d) == 2


@pytest.mark.parametrize(
    "row, error",
    [
        ("XX,INDU,I5,2020-03,20,50,30", VocabularyError),
        ("BE,INDU,Q9,2020-03,20,50,30", VocabularyError),
        ("BE,SERV,I5,2020-03,20,50,30", VocabularyError),
        ("BE,INDU,I5,2020-13,20,50,30", RowValidationError),
        ("BE,INDU,I5,2020-03,20,50", RowValidationError),
        ("BE,INDU,I5,2020-03,20,abc,30", RowValidationError),
        ("BE,INDU,I5,2020-03,-20,90,30", RowValidationError),
    ],
)
def test_row_errors(row, error):
    with pytest.raises(error):
        parse_csv(BUSINESS_HEADER + row + "\n")


def test_duplicate_key():
    row = "BE,INDU,I5,2020-03,20,50,30\n"
    with pytest.raises(DuplicateKeyError):
        parse_csv(BUSINESS_HEADER + row + row)


def test_all_dont_know_row():
    with pytest.raises(RowValidationError, match="don't know"):
        parse_csv(CONSUMER_HEADER + "BE,CONS,C2,2020-03,0,0,0,0,0,100\n")


def test_bad_header():
    with pytest.raises(Exception, match="header"):
        parse_csv("country,survey,question,period,up,same,down\n")


@pytest.mark.parametrize(
    "raw, expected",
    [
        ((0.1, 0.2, 0.4, 0.2, 0.05, 0.05), (0.10526316, 0.21052632, 0.42105263, 0.21052632, 0.05263158)),
        ((0.2, 0.2, 0.2, 0.2, 0.2, 0.0), (0.2, 0.2, 0.2, 0.2, 0.2)),
    ],
)
def test_apply_dont_know_drop(raw, expected):
    out = apply_dont_know_policy(SharesVector(raw), DontKnowPolicy.DROP)
    assert out.shares == pytest.approx(expected, abs=1e-8)


def test_apply_dont_know_degenerate():
    with pytest.raises(DegenerateDistributionError):
        apply_dont_know_policy(SharesVector((0, 0, 0, 0, 0, 1.0)), "drop")


def test_apply_dont_know_include_is_identity():
    raw = SharesVector((0.1, 0.2, 0.4, 0.2, 0.05, 0.05))
    assert apply_dont_know_policy(raw, "include") is raw


def test_policy_not_reapplied_to_processed_vector():
    processed = SharesVector((0.2,) * 5)
    with pytest.raises(ValueError, match="arity 5"):
        apply_dont_know_policy(processed, "drop")


def _uk_building_dataset():
    rows = [BUSINESS_HEADER.strip()]
    for p in period_list("2019-06", "2020-06"):
        rows.append(f"UK,BUIL,B5,{p},20,50,30")
        if p <= Period(2019, 11):
            rows.append(f"UK,BUIL,B4,{p},20,50,30")
    return parse_csv("\n".join(rows) + "\n")


def period_list(a, b):
    return list(catalog.period_range(catalog.parse_period(a), catalog.parse_period(b)))


def test_missing_report_truncated_series():
    d = _uk_building_dataset()
    gaps = missing_report(d, Period(2019, 6), Period(2020, 6))
    assert len(gaps) == 1
    gap = gaps[0]
    assert (gap.geo, gap.question) == ("GB", "B4")
    assert gap.last == Period(2019, 11)
    assert gap.n_missing == 7
    assert gap.missing[0] == Period(2019, 12)


def test_missing_report_complete_dataset():
    d = parse_csv(BUSINESS_HEADER + "BE,INDU,I5,2020-03,20,50,30\nBE,INDU,I5,2020-04,20,50,30\n")
    assert missing_report(d, Period(2020, 3), Period(2020, 4)) == []


def test_missing_report_mid_series_hole():
    d = parse_csv(BUSINESS_HEADER + "BE,INDU,I5,2020-03,20,50,30\nBE,INDU,I5,2020-05,20,50,30\n")
    (gap,) = missing_report(d, Period(2020, 3), Period(2020, 5))
    assert gap.missing == (Period(2020, 4),)


def test_merge_is_order_independent_and_rejects_overlap():
    a = parse_csv(BUSINESS_HEADER + "BE,INDU,I5,2020-03,20,50,30\n", provenance="a")
    b = parse_csv(BUSINESS_HEADER + "DE,INDU,I5,2020-03,20,50,30\n", provenance="b")
    assert a.merge(b).observations == b.merge(a).observations
    assert a.merge(b).provenance == b.merge(a).provenance
    with pytest.raises(DuplicateKeyError):
        a.merge(a)


def test_round_trip_fixture(fixtures_dir):
    for policy in ("drop", "include"):
        d = parse_csv((fixtures_dir / "panel.csv").read_text(), policy)
        again = parse_csv(to_csv(d), policy)
        assert again.observations.keys() == d.observations.keys()
        for k, o in d.observations.items():
            assert again.observations[k].coverage is o.coverage
            assert again.observations[k].shares.shares == pytest.approx(o.shares.shares, abs=1e-9)


# -- fuzzed rows -------------------------------------------------------------

question_codes = st.sampled_from(sorted(catalog.QUESTIONS))
percent_value = st.integers(0, 1000).map(lambda x: x / 10)


@st.composite
def valid_rows(draw):
    code = draw(question_codes)
    q = catalog.question(code)
    n = q.default_arity
    raw = draw(st.lists(st.integers(0, 1000), min_size=n, max_size=n).filter(lambda v: sum(v[:5]) > 0))
    total = sum(raw)
    # scale into 100 then jitter within 1%
    jitter = draw(st.floats(0.99, 1.01))
    values = [round(100 * x / total * jitter, 1) for x in raw]
    if sum(values[:5]) == 0:
        values[0] = 1.0
    return code, q.survey, values


@settings(max_examples=80, deadline=None)
@given(st.lists(valid_rows(), min_size=1, max_size=12), st.sampled_from(["drop", "include"]))
def test_fuzzed_rows_yield_valid_shares(rows, policy):
    lines = [CONSUMER_HEADER.strip()]
    for i, (code, survey, values) in enumerate(rows):
        p = Period(2000, 1).shift(i)
        lines.append(",".join(["BE", survey, code, str(p), *map(str, values)]))
    d = parse_csv("\n".join(lines) + "\n", policy)
    for o in d:
        s = o.shares.shares
        assert all(0 <= x <= 1 for x in s)
        assert abs(sum(s) - 1) <= 1e-6
        q = catalog.question(o.question)
        expected = 5 if q.is_consumer and policy == "drop" else q.default_arity
        assert o.shares.arity == expected
