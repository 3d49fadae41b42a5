import json

import pytest
from click.testing import CliRunner

from unitscan.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_scan_quad_empty_row(runner):
    res = runner.invoke(main, ["scan-quad", "--d", "7", "--pmax", "10000", "--workers", "1"])
    assert res.exit_code == 0
    lines = res.stdout.strip().splitlines()
    assert lines == ["field,p,mode,status,reason,aux"]  # header only, no hits


def test_scan_quad_json(runner):
    res = runner.invoke(main, ["scan-quad", "--d", "2", "--pmax", "100", "--format", "json", "--workers", "1"])
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["field"] == "quad(D=2)"
    assert [h["p"] for h in doc["hits"]] == [13, 31]
    assert doc["checksum"]


def test_scan_quad_csv_hits(runner):
    res = runner.invoke(main, ["scan-quad", "--d", "29", "--pmax", "50", "--workers", "1"])
    assert res.exit_code == 0
    assert "quad(D=29),3,quad,hit,," in res.stdout
    assert "quad(D=29),11,quad,hit,," in res.stdout


def test_scan_cubic_ordinary(runner):
    res = runner.invoke(
        main,
        ["scan-cubic", "--delta", "-23", "--pmax", "20000", "--mode", "ordinary", "--workers", "1"],
    )
    assert res.exit_code == 0
    rows = [l for l in res.stdout.splitlines() if l.startswith("cubic")]
    assert len(rows) == 1
    assert rows[0].startswith("cubic(delta=-23),13,ordinary,hit,,")
    aux = rows[0].split(",")[-1]
    assert len(aux.split()) == 3  # z coefficients mod p


def test_scan_cubic_h2_json_warning(runner):
    res = runner.invoke(
        main,
        ["scan-cubic", "--delta", "-31", "--pmax", "2000", "--mode", "h2",
         "--format", "json", "--workers", "1"],
    )
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["hits"] == []
    assert any("h_E unknown" in w for w in doc["warnings"])


def test_h5_text_and_json(runner):
    res = runner.invoke(main, ["h5", "--delta", "-139"])
    assert res.exit_code == 0
    assert "5, 7, 23" in res.stdout
    res = runner.invoke(main, ["h5", "--delta", "all", "--format", "json"])
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["-108"]["reduced"] == []
    assert doc["-59"]["reduced"] == [5, 29]


def test_scan_quad_full_verdicts(runner):
    res = runner.invoke(main, ["scan-quad", "--d", "29", "--pmax", "50",
                               "--full-verdicts", "--workers", "1"])
    assert res.exit_code == 0
    assert "quad(D=29),29,quad,excluded,ramified," in res.stdout
    assert "quad(D=29),5,quad,clear,," in res.stdout
    assert "quad(D=29),3,quad,hit,," in res.stdout


def test_wieferich_cli(runner):
    res = runner.invoke(main, ["wieferich", "--base", "2", "--pmax", "2000", "--workers", "1"])
    assert res.exit_code == 0
    assert "1093,wieferich,hit" in res.stdout


def test_heuristics_injective(runner):
    res = runner.invoke(main, ["heuristics", "injective-prob", "-p", "3", "-n", "2", "-m", "2"])
    assert res.exit_code == 0
    assert "16/27" in res.stdout
    res = runner.invoke(main, ["heuristics", "injective-prob", "-p", "3", "-n", "3", "-m", "2"])
    assert res.exit_code == 2  # n > m


def test_heuristics_monte_carlo_deterministic(runner):
    args = ["heuristics", "monte-carlo", "-p", "2", "-n", "1", "-m", "1",
            "--trials", "2000", "--seed", "9"]
    out1 = runner.invoke(main, args)
    out2 = runner.invoke(main, args)
    assert out1.exit_code == 0
    assert out1.stdout == out2.stdout


def test_heuristics_densities(runner):
    res = runner.invoke(main, ["heuristics", "densities", "-p", "11"])
    assert res.exit_code == 0
    assert "1/66" in res.stdout


def test_heuristics_mult_dist(runner):
    res = runner.invoke(main, ["heuristics", "mult-dist", "--k0", "3", "--imax", "3"])
    assert res.exit_code == 0
    assert "2/3" in res.stdout and "2/27" in res.stdout


def test_heuristics_mertens(runner):
    res = runner.invoke(main, ["heuristics", "mertens", "--x", "10"])
    assert res.exit_code == 0
    assert "1.176190476" in res.stdout


def test_verify_tables_h5(runner):
    res = runner.invoke(main, ["verify-tables", "--table", "h5"])
    assert res.exit_code == 0
    assert "PASS" in res.stdout


def test_verify_tables_quad(runner):
    res = runner.invoke(main, ["verify-tables", "--table", "quad", "--workers", "1"])
    assert res.exit_code == 0
    assert "excluded by design" in res.stdout


def test_bad_arguments_exit_2(runner):
    assert runner.invoke(main, ["scan-quad", "--d", "nope", "--pmax", "100"]).exit_code == 2
    assert runner.invoke(main, ["scan-quad", "--pmax", "100"]).exit_code == 2
    assert runner.invoke(main, ["scan-cubic", "--delta", "-23", "--pmax", "10"]).exit_code == 2
    assert runner.invoke(main, ["scan-quad", "--d", "999", "--pmax", "100"]).exit_code == 2


def test_missing_data_dir_exit_3(runner, tmp_path):
    res = runner.invoke(main, ["scan-quad", "--d", "2", "--pmax", "100",
                               "--data-dir", str(tmp_path)])
    assert res.exit_code == 3
    bad = tmp_path / "quad_fields.txt"
    bad.write_text("12 1\n")  # not squarefree
    res = runner.invoke(main, ["scan-quad", "--d", "12", "--pmax", "100",
                               "--data-dir", str(tmp_path)])
    assert res.exit_code == 3


def test_data_dir_env_override(runner, tmp_path, monkeypatch):
    # one plain row plus one with an explicit unit override (eps = omega)
    (tmp_path / "quad_fields.txt").write_text("2 1\n5 1 0 1\n")
    monkeypatch.setenv("UNITSCAN_DATA_DIR", str(tmp_path))
    res = runner.invoke(main, ["scan-quad", "--d", "all", "--pmax", "50", "--workers", "1"])
    assert res.exit_code == 0
    assert "quad(D=2),13" in res.stdout
    assert "D=3" not in res.stdout  # only the overridden records exist
