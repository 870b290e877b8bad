import csv
import io
import json
import subprocess
import sys

import pytest

from entropy_lab.cli import SCHEMA, run_command, threads_from
from entropy_lab.sequences import degree_seqs
from reference import DEGREES


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    doc = json.loads(out)
    assert doc["schema"] == SCHEMA
    return doc


def test_entropy_closed_and_fitted(capsys):
    doc = run_json(capsys, "entropy", "--k", "2", "--k", "3")
    rows = {r["k"]: r for r in doc["result"]}
    assert rows[2]["closed_form"].startswith("0.9624236501")
    assert rows[3]["closed_form"].startswith("1.3327057628")
    assert rows[2]["recurrence"] == ["4", "-4", "1"]
    assert float(rows[3]["delta"]) < 1e-20


def test_entropy_closed_only_table(capsys):
    code, out, _ = run(capsys, "entropy", "--k", "4", "--closed-only", "--format", "table")
    assert code == 0 and "1.56679923" in out


def test_degrees_modp_csv(capsys):
    code, out, _ = run(capsys, "degrees", "--k", "2", "--n", "7", "--method", "modp",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [int(r["degree"]) for r in rows] == DEGREES[2]


@pytest.mark.parametrize("method", ["recurrence", "exact"])
def test_degrees_other_methods(capsys, method):
    doc = run_json(capsys, "degrees", "--k", "3", "--n", "4", "--method", method)
    got = [row["degree"] for row in doc["result"][0]["rows"]] if "rows" in doc["result"][0] \
        else doc["result"][0]["degrees"]
    assert [int(x) for x in got] == DEGREES[3][:5]


def test_plot_data_has_a_log_column(capsys):
    code, out, _ = run(capsys, "degrees", "--k", "2", "--n", "5", "--plot-data", "--format", "csv")
    header = out.splitlines()[0].split(",")
    assert code == 0 and "log_degree" in header


def test_iterate_agrees_with_the_orbit(capsys):
    doc = run_json(capsys, "iterate", "--k", "2", "--n", "3")
    steps = doc["result"][0]["steps"]
    assert all(s["agrees"] for s in steps) and all(s["ord_a"] == s["beta"] for s in steps)


def test_chain_dump(capsys, tmp_path):
    doc = run_json(capsys, "chain", "--k", "2", "--n", "3", "--convention", "plane",
                   "--dump", str(tmp_path / "ch"))
    assert doc["result"][0]["dumped_to"] == str(tmp_path / "ch")
    man = json.loads((tmp_path / "ch" / "manifest.json").read_text())
    assert [d["degree"] for d in man["degrees"]] == [1, 3, 9, 24]


def test_chain_both_modes(capsys):
    code, _, _ = run(capsys, "chain", "--k", "3", "--n", "3", "--mode", "both")
    assert code == 0


def test_sc_test_verdicts(capsys):
    doc = run_json(capsys, "sc-test", "--k", "2", "--k", "3")
    verdicts = {r["k"]: r["verdict"] for r in doc["result"]}
    assert verdicts == {2: "confined", 3: "non_confined"}


def test_verify_exit_code_and_formats(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "structural", "--k", "2", "--n", "3",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and all(r["violated"] == "0" for r in rows)
    code, out, _ = run(capsys, "verify", "--suite", "structural", "--k", "3", "--n", "3",
                       "--format", "jsonl")
    assert code == 0 and all(json.loads(l)["outcome"] == "verified" for l in out.splitlines())


def test_profile_expression_and_file(capsys, tmp_path):
    doc = run_json(capsys, "profile", "x[n+1] = -x[n-1] + x[n] + 1/x[n]^2", "--n", "8")
    assert doc["result"]["profile"]["degrees"] == list(degree_seqs(2, 8)[1])
    path = tmp_path / "map.txt"
    path.write_text("# Lyness\nx[n+1] = (x[n] + 1) / x[n-1]\n")
    doc = run_json(capsys, "profile", str(path), "--n", "6")
    assert doc["result"]["profile"]["degrees"] == [1, 1, 2, 1, 1, 1, 1]


def test_output_is_byte_identical_across_runs(capsys):
    argv = ["degrees", "--k", "3", "--n", "6", "--method", "modp", "--seed", "11"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    argv = ["verify", "--suite", "structural", "--k", "2", "--n", "2"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_out_flag_writes_a_file(capsys, tmp_path):
    target = tmp_path / "e.json"
    code, out, _ = run(capsys, "entropy", "--k", "2", "--closed-only", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "entropy"


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["entropy", "--k", "0"],
    ["degrees", "--k", "2", "--n", "-1"],
    ["profile", "x[n+1] = x[n] +"],
    ["profile", "x[n+1] = x[n-3]"],
    ["verify", "--suite", "nope"],
    ["sc-test", "--k", "2", "--u", "0"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_thread_count_precedence(monkeypatch):
    class A:
        threads = None
    monkeypatch.setenv("ENTROPY_LAB_THREADS", "3")
    assert threads_from(A) == 3
    A.threads = 2
    assert threads_from(A) == 2
    monkeypatch.delenv("ENTROPY_LAB_THREADS")
    A.threads = None
    assert threads_from(A) == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "entropy_lab", "entropy", "--k", "2",
                          "--closed-only", "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("k,")
