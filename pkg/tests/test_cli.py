import json
import subprocess
import sys
from pathlib import Path

import pytest

from dcut_lab.cli import PROBLEMS, main
from dcut_lab.graph import complete_graph, format_graph, parse_graph

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def solve(capsys, *argv):
    code, out, _ = run(capsys, "solve", *argv)
    return code, json.loads(out)


def test_solve_p4_cut(capsys):
    code, out = solve(capsys, "disconnected-cut", FIX / "p4.graph")
    assert code == 0
    assert out["answer"] is True and out["witness"] == {"u": [0, 2]}
    assert {"problem", "nodes_explored", "millis"} <= set(out)


def test_solve_k4_surjective(capsys):
    code, out = solve(capsys, "surjective-c4r", FIX / "k4.graph")
    assert code == 0 and out["answer"] is False and out["witness"] is None


def test_solve_c4_retract(capsys):
    code, out = solve(capsys, "retract-c4r", FIX / "c4.graph", "--emb", "0,1,2,3")
    assert code == 0 and out["witness"] == {"labels": [0, 1, 2, 3]}


@pytest.mark.parametrize("problem", PROBLEMS)
def test_witnesses_revalidate(capsys, tmp_path, problem):
    extra = ["--emb", "0,1,2,3"] if problem == "retract-c4r" else []
    code, out = solve(capsys, problem, FIX / "c4.graph", *extra)
    assert code == 0 and out["answer"] is True
    path = tmp_path / "w.json"
    path.write_text(json.dumps(out))
    code, text, _ = run(capsys, "check", problem, FIX / "c4.graph", path, *extra)
    assert code == 0 and json.loads(text)["valid"] is True


def test_check_rejects_bad_witness(capsys, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"u": [0, 1]}))
    code, text, _ = run(capsys, "check", "disconnected-cut", FIX / "p4.graph", path)
    assert code == 1 and json.loads(text)["valid"] is False


@pytest.mark.parametrize("argv", [
    ["solve", "nope", "x.graph"],
    ["solve", "disconnected-cut", "missing.graph"],
    ["solve", "retract-c4r", str(FIX / "c4.graph")],
    ["solve", "retract-c4r", str(FIX / "k4.graph"), "--emb", "0,1,2,3"],
    ["verify", "nope"],
    [],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_parse_failure_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("n 2\ne 0 5\n")
    code, _, err = run(capsys, "solve", "disconnected-cut", bad)
    assert code == 2 and "error" in err


def test_timeout_exit_1(capsys, tmp_path):
    k12 = tmp_path / "k12.graph"
    k12.write_text(format_graph(complete_graph(12)))
    # 2^11 side assignments to refute, so the deadline poll fires
    code, out = solve(capsys, "biclique-contract", k12, "--timeout", "0")
    assert code == 1
    assert out["timeout"] is True and out["answer"] is None


@pytest.mark.parametrize("stage,n", [("dgraph", 10), ("semicompactor", 35)])
def test_reduce_r1(capsys, tmp_path, stage, n):
    out = tmp_path / f"{stage}.graph"
    code, _, _ = run(capsys, "reduce", FIX / "r1.json", "--stage", stage, "-o", out)
    assert code == 0
    g = parse_graph(out.read_text())
    assert g.n == n
    side = json.loads((tmp_path / f"{stage}.graph.labels.json").read_text())
    assert side["h"] == [0, 1, 2, 3] and len(side["vertices"]) == n


def test_reduce_compactor(capsys, tmp_path):
    out = tmp_path / "c.graph"
    assert run(capsys, "reduce", FIX / "r1.json", "--stage", "compactor", "-o", out)[0] == 0
    assert parse_graph(out.read_text()).n == 35


def test_reduce_invalid_instance(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"elements": ["p", "q", "z"], "R1": [["p", "q"]]}')
    code, _, _ = run(capsys, "reduce", bad, "-o", tmp_path / "x.graph")
    assert code == 2


def test_verify_structure(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "structure", "--report", report)
    assert code == 0
    assert out.startswith("structure: PASS - 5 cases")
    assert json.loads(report.read_text())["status"] == "pass"


def test_verify_is_deterministic(capsys, tmp_path):
    digests = []
    for i in range(2):
        report = tmp_path / f"r{i}.json"
        run(capsys, "verify", "dgraph-diameter", "--count", "10", "--seed", "3", "--report", report)
        digests.append(json.loads(report.read_text())["digest"])
    assert digests[0] == digests[1]


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "graph", "--n", "5", "--p", "1")
    assert code == 0 and len(parse_graph(out).edges) == 10
    code, out, _ = run(capsys, "gen", "dinstance", "--elements", "1", "--tuples", "0,0,1,0")
    assert json.loads(out)["R3"] == [["p0", "p0"]]
    target = tmp_path / "a.json"
    run(capsys, "gen", "dinstance", "--seed", "4", "-o", target)
    again = tmp_path / "b.json"
    run(capsys, "gen", "dinstance", "--seed", "4", "-o", again)
    assert target.read_bytes() == again.read_bytes()


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "dcut_lab.cli", "solve", "compact-c4r", str(FIX / "c4.graph")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["answer"] is True
