import json

import pytest

from liftlab import cli, verify
from liftlab.counting import LiftCountReport, count_congruence_lifts_formula


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_table_both_modes(capsys):
    code, out, err = run(capsys, "count", "--group", "gamma0", "--n", "1..16")
    assert code == 0 and err == ""
    lines = out.splitlines()
    assert lines[0].split() == ["kind", "N", "branch", "formula", "engine",
                                "agree"]
    rows = {int(line.split()[1]): line.split() for line in lines[2:]}
    assert rows[8][-3:] == ["9", "9", "yes"]
    assert rows[7][-3:] == ["3", "3", "yes"]
    assert all(row[-1] == "yes" for row in rows.values())


def test_count_formula_json_round_trip(capsys):
    code, out, err = run(capsys, "count", "--group", "gamma", "--n", "2",
                         "--mode", "formula", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 1
    assert payload[0]["count"] == 5
    assert LiftCountReport.from_dict(payload[0]) == \
        count_congruence_lifts_formula("gamma", 2)


def test_count_rejects_bad_range(capsys):
    code, _, err = run(capsys, "count", "--group", "gamma1", "--n", "0")
    assert code == 1
    assert "bad level range" in err
    code, _, _ = run(capsys, "count", "--group", "gamma1", "--n", "9..4")
    assert code == 1


def test_count_unknown_group_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["count", "--group", "gamma9", "--n", "4"])
    assert info.value.code == 1


def test_classify_csv_columns(capsys):
    code, out, _ = run(capsys, "classify", "--group", "gamma0", "--n", "6",
                       "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ("kind,N,s,t,index,e2,e3,r,"
                        "total_lifts,congruence,noncongruence")
    assert lines[1] == "gamma0,6,1,1,12,0,0,3,9,5,4"


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--group", "gamma1", "--n", "4..5",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert [(p["N"], p["total_lifts"], p["congruence"], p["noncongruence"])
            for p in payload] == [(4, 5, 5, 0), (5, 9, 3, 6)]
    assert payload[1]["witness"]["classification"] == "noncongruence"


def test_classify_rejects_gamma(capsys):
    code, _, err = run(capsys, "classify", "--group", "gamma", "--n", "4")
    assert code == 1
    assert "use `count`" in err


def test_witness_export_and_reverify(capsys, tmp_path):
    path = tmp_path / "w.json"
    code, out, _ = run(capsys, "witness", "--group", "gamma1", "--n", "5",
                       "--out", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    assert set(data) == {"kind", "N", "character", "generators",
                         "classification", "certificate"}
    assert data["classification"] == "noncongruence"
    ok, message = verify.verify_witness_data(data)
    assert ok, message

    code, out, _ = run(capsys, "verify-witness", "--in", str(path))
    assert code == 0
    assert "witness re-verified" in out


def test_witness_tamper_detected(capsys, tmp_path):
    path = tmp_path / "w.json"
    run(capsys, "witness", "--group", "gamma0", "--n", "6",
        "--out", str(path))
    data = json.loads(path.read_text())
    data["character"]["free_signs"][0] *= -1
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify-witness", "--in", str(path))
    assert code == 2
    assert "do not match" in out


def test_witness_missing_cases(capsys):
    code, _, err = run(capsys, "witness", "--group", "gamma0", "--n", "4")
    assert code == 3
    assert err.startswith("no witness:")
    code, _, err = run(capsys, "witness", "--group", "gamma0", "--n", "7")
    assert code == 3
    assert "exhaustive enumeration" in err
    code, _, err = run(capsys, "witness", "--group", "gamma1", "--n", "4..5")
    assert code == 1
    assert "single level" in err
    code, _, err = run(capsys, "witness", "--group", "gamma", "--n", "6")
    assert code == 1


def test_presentation_json_metadata(capsys):
    code, out, _ = run(capsys, "presentation", "--group", "gamma0", "--n", "7",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    record = payload[0]
    assert record["farey"]["seed_fractions"] == [[-1, 0], [0, 1], [1, 0]]
    assert record["farey"]["fractions"][0] == [-1, 0]
    assert (record["index"], record["e2"], record["e3"],
            record["r"]) == (8, 0, 2, 1)


def test_presentation_table(capsys):
    code, out, _ = run(capsys, "presentation", "--group", "gamma0", "--n", "6")
    assert code == 0
    assert out.splitlines()[0] == "gamma0(6): index 12, e2 0, e3 0, r 3"
    assert sum(1 for line in out.splitlines() if line.startswith("  ")) == 3


def test_verify_subset_passes(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "4")
    assert code == 0
    assert "8/8 checks passed" in out


def test_verify_seed_tamper_flags_census(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "5", "--seed-tamper")
    assert code == 2
    lines = [line for line in out.splitlines() if "gamma1-census" in line]
    assert lines and "FAIL" in lines[0]
    assert "correctly rejected" in lines[0]
    assert "7/8 checks passed" in out


def test_verify_json_format(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "4", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 8
    assert all(item["passed"] for item in payload)
    assert {item["name"] for item in payload} == {
        "count-agreement", "quotient-structure", "small-level-table",
        "gamma1-census", "classification-vs-predicates", "hyperplane-lemma",
        "general-level", "property-suite"}


def test_out_file_option(capsys, tmp_path):
    path = tmp_path / "counts.csv"
    code, out, _ = run(capsys, "count", "--group", "gamma0", "--n", "3..4",
                       "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "kind,N,branch,formula,engine,agree"
    assert len(lines) == 3


def test_missing_witness_file(capsys):
    code, _, err = run(capsys, "verify-witness", "--in", "/no/such/file.json")
    assert code == 1
    assert "error:" in err
