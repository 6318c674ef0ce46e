import json
from fractions import Fraction

import pytest

from dcut_lab.errors import InputError
from dcut_lab.graph import complete_graph
from dcut_lab.harness import (
    BATTERIES,
    Case,
    GeneratorConfig,
    connected_graphs,
    dinstance_family,
    gen_dinstance,
    gen_graph,
    run_battery,
    run_cases,
    small_instances,
)


def test_gen_dinstance_deterministic():
    cfg = GeneratorConfig(seed=11, num_elements=3, tuples_per_relation=2)
    a, b = gen_dinstance(cfg), gen_dinstance(cfg)
    assert a.to_json() == b.to_json()
    used = {x for _, _, p, q in a.pairs() for x in (p, q)}
    assert used == set(a.elements)
    assert gen_dinstance(GeneratorConfig(seed=12, num_elements=3, tuples_per_relation=2)) != a


def test_gen_dinstance_single_r3():
    a = gen_dinstance(GeneratorConfig(seed=0, num_elements=1, tuples_per_relation=(0, 0, 1, 0)))
    assert a.elements == ("p0",)
    assert a.relations == ((), (), (("p0", "p0"),), ())


def test_gen_dinstance_fixture_json():
    a = gen_dinstance(GeneratorConfig(seed=5, num_elements=2, tuples_per_relation=(1, 0, 0, 1)))
    assert a.to_json() == gen_dinstance(GeneratorConfig(seed=5, num_elements=2,
                                                        tuples_per_relation=(1, 0, 0, 1))).to_json()
    assert json.loads(a.to_json())["elements"] == ["p0", "p1"]


@pytest.mark.parametrize("kwargs", [
    {"num_elements": 2, "tuples_per_relation": 0},
    {"num_elements": 0, "tuples_per_relation": 1},
    {"num_elements": 1, "tuples_per_relation": (1, 1)},
])
def test_gen_dinstance_errors(kwargs):
    with pytest.raises(InputError):
        gen_dinstance(GeneratorConfig(**kwargs))


def test_edge_probability_range():
    with pytest.raises(InputError):
        GeneratorConfig(edge_probability=Fraction(3, 2))


def test_gen_graph():
    assert gen_graph(GeneratorConfig(graph_n=5, edge_probability=Fraction(1))) == complete_graph(5)
    assert gen_graph(GeneratorConfig(graph_n=1, edge_probability=Fraction(0))) == complete_graph(1)
    cfg = GeneratorConfig(seed=9, graph_n=7, edge_probability=Fraction(2, 5))
    assert gen_graph(cfg) == gen_graph(cfg)
    with pytest.raises(InputError):
        gen_graph(GeneratorConfig(graph_n=0))


def test_families():
    assert [sum(1 for _ in connected_graphs(n)) for n in range(1, 6)] == [1, 1, 4, 38, 728]
    assert len(small_instances(2, 2)) == 126
    fam = dinstance_family(3, 10)
    assert [a.to_json() for a in fam] == [a.to_json() for a in dinstance_family(3, 10)]
    assert all(len(a.elements) <= 4 and sum(map(len, a.relations)) <= 6 for a in fam)


def test_report_determinism_ignores_time():
    r1 = run_battery("dgraph-diameter", seed=4, count=15)
    r2 = run_battery("dgraph-diameter", seed=4, count=15, threads=3)
    assert r1.digest == r2.digest
    assert [c["index"] for c in r2.cases] == list(range(15))


def test_failure_and_timeout_records():
    def bad(res, stats):
        res.verdicts["x"] = 1
        res.fail("made up")

    def slow(res, stats):
        while True:
            stats.tick()

    rep = run_cases("t", {}, [Case({"i": 0}, bad)], timeout=None)
    assert rep.status == "fail" and rep.exit_code == 1
    assert rep.cases[0]["counterexample"]["input"] == {"i": 0}
    rep = run_cases("t", {}, [Case({"i": 1}, slow)], timeout=0.05)
    assert rep.status == "inconclusive" and rep.cases[0]["status"] == "timeout"
    rep = run_cases("t", {}, [Case({}, lambda res, stats: None)], timeout=None, min_conclusive=2)
    assert rep.status == "inconclusive"


def test_unknown_battery():
    with pytest.raises(InputError):
        run_battery("nope")


@pytest.mark.parametrize("name", ["structure", "contrast", "tables"])
def test_small_batteries_pass(name):
    rep = run_battery(name)
    assert rep.status == "pass", rep.summary
    assert name in BATTERIES


def test_report_json_shape():
    rep = run_battery("structure")
    obj = json.loads(rep.to_json())
    assert obj["status"] == "pass" and len(obj["cases"]) == 5
    assert {"input_digest", "verdicts", "witness_digests", "nodes", "millis"} <= set(obj["cases"][0])
