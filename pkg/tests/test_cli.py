import json

from importlib import resources

import pytest

from fqzeta.cli import (EXIT_GUARD, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE,
                        display_from_record, main, parse_int_poly)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def jsonl(text):
    return [json.loads(line) for line in text.strip().splitlines() if line]


def test_zeta_all_methods_match(capsys):
    code, out, _ = run(capsys, "zeta", "M8", "--q", "7", "--kind", "ideal",
                       "--method", "all")
    assert code == EXIT_OK
    assert out.count("[1, 8, 3, 2, 1]") == 3
    assert "verdict: MATCH" in out


def test_zeta_formula_shows_symbolic_branch(capsys):
    code, out, _ = run(capsys, "zeta", "L3(a=0)", "--q", "5", "--kind", "ideal",
                       "--method", "formula")
    assert code == EXIT_OK
    assert "[1, 6, 2, 1]" in out
    assert "branch  [a=0]" in out
    assert "(1 + q)t" in out


def test_zeta_json_round_trip(capsys):
    code, out, _ = run(capsys, "zeta", "M6(a=2,b=0)", "--q", "5",
                       "--kind", "sub", "--method", "formula", "--json")
    assert code == EXIT_OK
    recs = jsonl(out)
    assert len(recs) == 1
    rec = recs[0]
    assert rec["schema_version"] == "1"
    assert all(c == str(int(c)) for c in rec["coeffs"])
    # round-trip: records reproduce the human display exactly
    code2, human, _ = run(capsys, "zeta", "M6(a=2,b=0)", "--q", "5",
                          "--kind", "sub", "--method", "formula")
    assert display_from_record(rec) in human


def test_zeta_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "zeta", "M99", "--q", "5")
    assert code == EXIT_PARSE and "unknown family" in err
    code, _, err = run(capsys, "zeta", "M6(a=2)", "--q", "5")
    assert code == EXIT_PARSE
    code, _, err = run(capsys, "zeta", "M8", "--q", "6")
    assert code == EXIT_PARSE


def test_zeta_guard_violations_exit_3(capsys):
    code, _, err = run(capsys, "zeta", "M9(a=1)", "--q", "5")
    assert code == EXIT_GUARD and "M9" in err
    # oracle guard: q too large for full enumeration
    code, _, err = run(capsys, "zeta", "M8", "--q", "17", "--method", "oracle")
    assert code == EXIT_GUARD


def test_zeta_corrupted_table_gives_mismatch(tmp_path, monkeypatch, capsys):
    # meta-test: breaking one formula coefficient must surface as exit 1
    packaged = (resources.files("fqzeta") / "tables" /
                "zeta_branches.txt").read_text()
    corrupted = packaged.replace(
        "M8 ideal any : 1 | 1+q | 3 | 2 | 1",
        "M8 ideal any : 1 | 1+q | 4 | 2 | 1")
    assert corrupted != packaged
    alt = tmp_path / "corrupt.txt"
    alt.write_text(corrupted)
    monkeypatch.setenv("FQZETA_BRANCH_TABLE", str(alt))
    code, out, _ = run(capsys, "zeta", "M8", "--q", "7", "--kind", "ideal",
                       "--method", "all")
    assert code == EXIT_MISMATCH
    assert "verdict: MISMATCH" in out


def test_verify_small_ok(tmp_path, capsys):
    out_path = tmp_path / "report.jsonl"
    code, out, _ = run(capsys, "verify", "--families", "L22,L3",
                       "--q-set", "2,3,5", "--kinds", "both",
                       "--threads", "1", "--out", str(out_path))
    assert code == EXIT_OK
    assert "total:" in out
    recs = jsonl(out_path.read_text())
    assert recs[-1]["command"] == "verify.summary"
    rows = [r for r in recs if r["command"] == "verify"]
    # L22 has no parameters; L3 sweeps a over each field
    assert len(rows) == 2 * (1 + 2) + 2 * (1 + 3) + 2 * (1 + 5)
    assert all(r["status"] == "PASS" for r in rows)
    assert all(r["coeffs"] == r["formula_coeffs"] for r in rows)


def test_verify_m12_char2_anomaly_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "--families", "M12", "--q-set", "2",
                       "--threads", "1")
    assert code == EXIT_OK
    assert "ANOMALY" in out


def test_verify_corrupted_table_fails(tmp_path, monkeypatch, capsys):
    packaged = (resources.files("fqzeta") / "tables" /
                "zeta_branches.txt").read_text()
    alt = tmp_path / "corrupt2.txt"
    alt.write_text(packaged.replace(
        "L22 ideal any : 1 | 1 | 1", "L22 ideal any : 1 | 2 | 1"))
    monkeypatch.setenv("FQZETA_BRANCH_TABLE", str(alt))
    code, out, _ = run(capsys, "verify", "--families", "L22", "--q-set", "3",
                       "--kinds", "ideal", "--threads", "1")
    assert code == EXIT_MISMATCH
    assert "FAIL" in out


def test_porc_v720(capsys):
    code, out, _ = run(capsys, "porc", "--poly", "v720", "--pmax", "500",
                       "--nmax", "6")
    assert code == EXIT_OK
    assert "classification check: PASS" in out
    assert "count 0 at p=" in out and "count 3 at p=" in out
    assert "no consistent modulus" in out


def test_porc_x2_minus_1(capsys):
    code, out, _ = run(capsys, "porc", "--poly", "x^2-1", "--pmax", "100")
    assert code == EXIT_OK
    assert "2: 24" in out  # constant count 2 for every odd prime <= 100
    assert "N= 2: consistent" in out
    assert "smallest consistent modulus: N=2" in out
    assert "exceptions=[2]" in out  # p = 2 is the lone deviation at N = 1


def test_porc_empty_sample_warning(capsys):
    code, out, _ = run(capsys, "porc", "--poly", "v720", "--pmax", "3")
    assert code == EXIT_OK
    assert "empty sample" in out


def test_porc_pmax_guard(capsys):
    code, _, err = run(capsys, "porc", "--pmax", str(10**7))
    assert code == EXIT_GUARD


def test_parse_int_poly():
    assert parse_int_poly("2x^3+1") == [1, 0, 0, 2]
    assert parse_int_poly("x^2-1") == [-1, 0, 1]
    assert parse_int_poly("-x+3") == [3, -1]
    assert parse_int_poly("5") == [5]
    with pytest.raises(Exception):
        parse_int_poly("x^")


def test_catalog_lists_19_families(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == EXIT_OK
    lines = [l for l in out.splitlines() if l and not l.startswith("family")]
    assert len(lines) == 19
    assert any("M9" in l and "irreducible" in l for l in lines)


def test_iso_cli(capsys):
    code, out, _ = run(capsys, "iso", "--q-set", "5", "--kinds", "sub",
                       "--families", "L11,L21,L22,L1,L2,L3,L4")
    assert code == EXIT_OK
    assert "L21" in out and "L22" in out


def test_period_cli(capsys):
    code, out, _ = run(capsys, "period", "--families", "L3",
                       "--q-set", "5,7,11,13")
    assert code == EXIT_OK
    assert "equal" in out and "DIFFER" not in out
