import json

import pytest

from unitscan.primes import PrimeRange
from unitscan.quadratic import scan_quadratic
from unitscan.report import (
    CSV_COLUMNS,
    CUBIC_ORDINARY_TABLE,
    H5_TABLE,
    QUAD_TABLE,
    ScanReport,
    Verdict,
    report_from_json,
    report_to_csv,
    report_to_json,
    verify_tables,
)


def sample_report(full=False):
    hits = (Verdict(13, "hit", aux=(5, 0, 11)), Verdict(31, "hit", aux=(1, 2, 3)))
    excluded = (Verdict(11, "excluded", reason="hyp5_in_H5"),) if full else None
    clears = (7, 19) if full else None
    return ScanReport(
        field_id="cubic(delta=-23)",
        mode="ordinary",
        lo=3,
        hi=100,
        hits=hits,
        excluded=excluded,
        clears=clears,
        warnings=("h_E unknown for delta=-23: the class-number exclusion was not applied",),
        wall_time=0.125,
        workers=2,
    )


@pytest.mark.parametrize("full", [False, True])
def test_json_round_trip(full):
    rep = sample_report(full)
    back = report_from_json(report_to_json(rep))
    assert back == rep


def test_checksum_ignores_volatile_metadata():
    a = sample_report()
    b = ScanReport(
        field_id=a.field_id, mode=a.mode, lo=a.lo, hi=a.hi, hits=a.hits,
        warnings=a.warnings, wall_time=9.5, workers=8,
    )
    assert a.checksum == b.checksum


def test_checksum_detects_tampering():
    doc = json.loads(report_to_json(sample_report()))
    doc["hits"][0]["p"] = 17
    with pytest.raises(ValueError, match="checksum"):
        report_from_json(json.dumps(doc))


def test_hits_must_ascend():
    with pytest.raises(ValueError, match="ascending"):
        ScanReport("f", "m", 2, 10, hits=(Verdict(7, "hit"), Verdict(5, "hit")))


def test_verdict_validation():
    with pytest.raises(ValueError):
        Verdict(5, "excluded")  # missing reason
    with pytest.raises(ValueError):
        Verdict(5, "bogus")


def test_csv_fixed_columns():
    text = report_to_csv(sample_report(full=True))
    lines = text.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "cubic(delta=-23),13,ordinary,hit,,5 0 11"
    assert lines[2] == "cubic(delta=-23),31,ordinary,hit,,1 2 3"
    assert "cubic(delta=-23),7,ordinary,clear,," in lines
    assert "cubic(delta=-23),11,ordinary,excluded,hyp5_in_H5," in lines


def test_csv_hits_only_by_default():
    text = report_to_csv(sample_report(full=False))
    assert len(text.strip().splitlines()) == 3  # header + 2 hits


def test_reference_tables_load(ref_tables):
    assert set(ref_tables["quad_table"]) == {d for d in range(2, 30) if d in ref_tables["quad_table"]}
    assert len(ref_tables["h5_table"]) == 14
    assert len(ref_tables["cubic_ordinary_table"]) == 14
    assert ref_tables["quad_table"][14] == [2]
    assert ref_tables["cubic_ordinary_table"][-83] == [7, 31]


def test_verify_h5_table():
    diff = verify_tables(H5_TABLE)
    assert diff.passed
    assert all(not r.by_design for r in diff.rows)


def test_verify_quad_table():
    diff = verify_tables(QUAD_TABLE)
    assert diff.passed
    notes = {r.key: r.by_design for r in diff.rows if r.by_design}
    assert list(notes) == [14]
    assert "excluded by design" in notes[14][0]


def test_verify_rejects_small_pmax():
    with pytest.raises(ValueError, match="largest table entry"):
        verify_tables(QUAD_TABLE, pmax=100)
    with pytest.raises(ValueError, match="largest table entry"):
        verify_tables(CUBIC_ORDINARY_TABLE, pmax=1000)
    with pytest.raises(ValueError, match="unknown table"):
        verify_tables("nope")


def test_scan_report_integration(quad_records):
    rep = scan_quadratic(quad_records[22], PrimeRange(3, 500))
    assert [v.p for v in rep.hits] == [43, 73, 409]
    back = report_from_json(report_to_json(rep))
    assert back == rep
    assert "quad(D=22),43,quad,hit,," in report_to_csv(rep)
