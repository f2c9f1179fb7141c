import csv
import io
import json

import pytest

from digitdioph.cli import run

PSI612 = "geom:c=1,beta=6,p=2,q=1,r=1"


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_profile_example(capsys):
    code, out, _ = call(capsys, "profile", "6", "12")
    data = json.loads(out)
    assert code == 0
    p = data["profile"]
    assert p["alpha1"] == {"num": 1, "den": 1} and p["alpha2"] == {"num": 2, "den": 1}
    assert p["bstar"] == 3 and p["kstar"] == 1
    assert data["D1"] == [3] and data["D2"] == [2] and data["Dstar"] == [0, 1, 4, 5]


def test_gamma_dp_example(capsys):
    code, out, _ = call(capsys, "gamma", "6", "12", "0,1,4,5", "--psi", PSI612,
                        "--n", "2", "--method", "dp")
    res = json.loads(out)["results"][0]
    assert code == 0 and res["count"] == 32 and res["m0"] == 4 and res["M"] == 9


def test_verdict_example(capsys):
    code, out, _ = call(capsys, "verdict", "5", "5", "1,2",
                        "--psi", "geom:c=1/4,beta=5,p=1,q=0,r=1", "--s", "1/2")
    assert code == 0
    assert json.loads(out)["verdict"]["measure_class"] == "EmptySet"


def test_exit_codes(capsys):
    assert call(capsys, "gamma", "6", "12", "0,1,4,5", "--psi", "bogus", "--n", "2")[0] == 1
    assert call(capsys, "profile", "2", "4")[0] == 1
    assert call(capsys, "verify", "divisibility", "6", "10", "--n-max", "3")[0] == 1
    assert call(capsys, "--budget-enum", "100", "gamma", "6", "12", "0,1,4,5",
                "--psi", PSI612, "--n", "3")[0] == 2
    assert call(capsys, "nonsense")[0] == 1
    assert call(capsys, "verify", "emptiness", "5", "5", "1,2",
                "--psi", "geom:c=1/4,beta=5,p=1", "--n-max", "4")[0] == 0


def test_failed_check_exits_three(capsys, monkeypatch):
    from digitdioph import verify

    def broken(b, t, n_max):
        return verify.CheckReport("divisibility", 1, [{"n": 1}])

    monkeypatch.setattr(verify, "check_divisibility", broken)
    assert call(capsys, "verify", "divisibility", "6", "12", "--n-max", "2")[0] == 3


def test_covering_bound_report_and_hypothesis_exit(capsys):
    code, out, _ = call(capsys, "verify", "covering-bound", "6", "12", "0,1,4,5",
                        "--psi", PSI612, "--n-max", "3")
    assert code == 0
    assert json.loads(out)["report"]["max_ratio"] == 2.0
    # the gamma_n law with t = b fails the forced-digit hypothesis, not a check
    code, _, _ = call(capsys, "verify", "forced-digits", "6", "6", "--n-max", "2")
    assert code == 1


def test_byte_stable_across_runs_and_threads(capsys):
    argv = ["gamma", "6", "12", "0,1,4,5", "--psi", PSI612, "--n", "5", "--members"]
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv)
    _, c, _ = call(capsys, *argv, "--threads", "3")
    assert a == b == c
    assert json.loads(a)["results"][0]["count"] == (4**6 + 2) // 3


def test_csv_columns(capsys):
    code, out, _ = call(capsys, "--format", "csv", "gamma", "6", "12", "0,1,4,5",
                        "--psi", PSI612, "--n-max", "3", "--method", "dp")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.split(",")[0] == "n"
    assert [r["ratio_to_b_alpha1_gamma_n"] for r in rows] == ["2", "2", "2"]
    assert [r["count"] for r in rows] == ["8", "32", "128"]


def test_table_and_output_file(capsys, tmp_path):
    target = tmp_path / "box.txt"
    code, out, _ = call(capsys, "--format", "table", "--output", str(target),
                        "boxcount", "3", "2", "0,2", "--n-max", "3")
    assert code == 0 and out == ""
    assert target.read_text().splitlines() == ["n\tgrid_count", "0\t1", "1\t2", "2\t4", "3\t6"]


def test_sweep(capsys, tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps({"runs": [
        {"subcommand": "profile", "args": [6, 12]},
        {"subcommand": "gamma", "args": [6, 12, "0,5"],
         "options": {"psi": PSI612, "n": 2, "method": "dp"}},
        {"subcommand": "verify", "args": ["divisibility", 6, 10], "options": {"n_max": 2}},
    ]}))
    code, out, _ = call(capsys, "sweep", "--spec", str(spec))
    rows = out.splitlines()
    assert rows[0] == "run,subcommand,status,result"
    assert rows[1].startswith("0,profile,ok,")
    assert rows[3].startswith("2,verify,HypothesisError,")
    assert code == 0


def test_verdict_lists_hypotheses(capsys):
    _, out, _ = call(capsys, "verdict", "6", "12", "0,1,4,5", "--psi", PSI612, "--s", "1/5")
    data = json.loads(out)
    holds = {h["name"]: h["holds"] for h in data["hypotheses"]}
    assert holds["D_subset_Dstar"] and holds["psi_eventually_below_threshold"]
    assert data["verdict"]["measure_class"] == "Infinite"
    assert data["inputs"]["N0"] == 1
