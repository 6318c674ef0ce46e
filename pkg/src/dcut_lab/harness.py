"""Random generators and the verification batteries.

A battery is a list of independent cases. Each case runs under its own
deadline and produces a record; the report collects records in case order.
Elapsed times are reported but left out of every digest so that the same
command and seed always yield the same digests.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import itertools
import json
import math
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence, Union

from . import oracles
from .errors import ClaimViolation, InputError, SearchTimeout
from .gadgets import (
    EXTENSION_TABLE,
    IMPOSSIBLE_ROWS,
    RETRACTION_TABLES,
    DInstance,
    build_compactor,
    build_d_graph,
    build_semi_compactor,
    extend_hom_to_retraction,
    extend_retraction_to_semicompactor,
    forced_companions,
    hom_to_d,
    restrict_retraction_to_hom,
    x_candidates,
)
from .graph import (
    TWO_K2,
    TWO_S2,
    Graph,
    diameter,
    is_connected,
    is_dominating_pair,
)
from .problems import (
    check_biclique_cover,
    check_compaction,
    check_contraction,
    check_cut,
    check_partition,
    check_prop1,
    check_retraction,
    check_surjective,
    find_2_biclique_vertex_cover,
    find_2k2_partition,
    find_2s2_partition,
    find_compaction_c4r,
    find_disconnected_cut,
    find_proper_biclique_contraction,
    find_retraction_c4r,
    find_surjective_hom_c4r,
)
from .relational import (
    D_STRUCTURE,
    PolymorphismKind,
    SearchStats,
    find_restricted_polymorphism,
    is_core,
    satisfies_kind,
)

DEFAULT_CASE_TIMEOUT = 60.0
LEMMA4_MIN_CONCLUSIVE = 20
BATTERIES = ("structure", "oracle", "prop1", "dgraph-diameter", "retraction",
             "semicompactor-diameter", "lemma4", "tables", "contrast")


# -- generators ------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    num_elements: int = 2
    tuples_per_relation: Union[int, Sequence[int]] = 1
    graph_n: int = 6
    edge_probability: Fraction = Fraction(1, 2)

    def __post_init__(self):
        p = Fraction(self.edge_probability)
        if not 0 <= p <= 1:
            raise InputError(f"edge probability {p} outside [0, 1]")
        object.__setattr__(self, "edge_probability", p)
        object.__setattr__(self, "seed", int(self.seed) & ((1 << 64) - 1))

    def relation_counts(self) -> tuple[int, int, int, int]:
        t = self.tuples_per_relation
        counts = (t,) * 4 if isinstance(t, int) else tuple(t)
        if len(counts) != 4 or any(c < 0 for c in counts):
            raise InputError(f"tuples_per_relation must be an int or four non-negative ints, got {t}")
        return counts


def element_names(n: int) -> list[str]:
    return [f"p{i}" for i in range(n)]


def gen_dinstance(cfg: GeneratorConfig, max_attempts: int = 10_000) -> DInstance:
    """Uniform distinct pairs per relation, resampled until every element is used."""
    counts = cfg.relation_counts()
    ne = cfg.num_elements
    if ne < 1:
        raise InputError("need at least one element")
    if 2 * sum(counts) < ne:
        raise InputError(f"{sum(counts)} tuples cannot cover {ne} elements")
    elems = element_names(ne)
    all_pairs = list(itertools.product(elems, repeat=2))
    if max(counts) > len(all_pairs):
        raise InputError(f"at most {len(all_pairs)} distinct pairs per relation")
    rng = random.Random(cfg.seed)
    for _ in range(max_attempts):
        rels = [rng.sample(all_pairs, c) for c in counts]
        used = {x for rel in rels for pair in rel for x in pair}
        if len(used) == ne:
            return DInstance.make(elems, *rels)
    raise InputError("could not cover all elements; try more tuples")


def gen_graph(cfg: GeneratorConfig, max_attempts: int = 100_000) -> Graph:
    """Erdos-Renyi sample with exact rational edge probability, resampled until connected."""
    n = cfg.graph_n
    if n < 1:
        raise InputError("graph_n must be >= 1")
    p = cfg.edge_probability
    rng = random.Random(cfg.seed)
    pairs = list(itertools.combinations(range(n), 2))
    for _ in range(max_attempts):
        edges = frozenset(e for e in pairs if rng.randrange(p.denominator) < p.numerator)
        g = Graph(n, edges)
        if is_connected(g):
            return g
    raise InputError(f"no connected sample after {max_attempts} attempts (n={n}, p={p})")


def _subseed(seed: int, *parts) -> int:
    h = hashlib.sha256(repr((seed,) + parts).encode()).digest()
    return int.from_bytes(h[:8], "big")


def dinstance_family(seed: int, count: int, max_elements: int = 4, max_tuples: int = 6) -> list[DInstance]:
    out = []
    for idx in range(count):
        rng = random.Random(_subseed(seed, "family", idx))
        ne = rng.randint(1, max_elements)
        cap = ne * ne
        total = rng.randint(max(1, math.ceil(ne / 2)), min(max_tuples, 4 * cap))
        counts = [0] * 4
        for _ in range(total):
            rel = rng.choice([i for i in range(4) if counts[i] < cap])
            counts[rel] += 1
        cfg = GeneratorConfig(seed=_subseed(seed, "inst", idx), num_elements=ne, tuples_per_relation=counts)
        out.append(gen_dinstance(cfg))
    return out


def small_instances(max_elements: int = 2, max_tuples: int = 2) -> list[DInstance]:
    """Every covering instance up to the bounds, elements named p0, p1, ..."""
    out = []
    for ne in range(1, max_elements + 1):
        elems = element_names(ne)
        cands = [(i, pair) for i in range(4) for pair in itertools.product(elems, repeat=2)]
        for k in range(1, max_tuples + 1):
            for chosen in itertools.combinations(cands, k):
                if {x for _, pair in chosen for x in pair} != set(elems):
                    continue
                rels = [[pair for i, pair in chosen if i == r] for r in range(4)]
                out.append(DInstance.make(elems, *rels))
    return out


def connected_graphs(n: int) -> Iterable[Graph]:
    """All connected labelled graphs on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        g = Graph(n, frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))
        if is_connected(g):
            yield g


# -- reports ---------------------------------------------------------------------

def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


def graph_payload(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def instance_payload(a: DInstance) -> dict:
    return json.loads(a.to_json())


@dataclass
class CaseResult:
    status: str = "pass"  # pass | fail | timeout
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    nodes: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.status = "fail"
        self.notes.append(msg)


@dataclass
class Case:
    payload: dict
    run: Callable[[CaseResult, SearchStats], None]


@dataclass
class VerificationReport:
    battery: str
    params: dict
    cases: list[dict]
    status: str  # pass | fail | inconclusive
    summary: str

    @property
    def digest(self) -> str:
        stable = [{k: v for k, v in c.items() if k != "millis"} for c in self.cases]
        return digest({"battery": self.battery, "params": self.params, "cases": stable, "status": self.status})

    def to_json(self) -> str:
        obj = {
            "battery": self.battery,
            "params": self.params,
            "status": self.status,
            "summary": self.summary,
            "digest": self.digest,
            "cases": self.cases,
        }
        return json.dumps(obj, indent=1, sort_keys=True, default=str)

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1}.get(self.status, 1)


def _execute(index: int, case: Case, timeout: Optional[float]) -> dict:
    res = CaseResult()
    start = time.monotonic()
    stats = SearchStats(deadline=None if timeout is None else start + timeout)
    try:
        case.run(res, stats)
    except SearchTimeout as exc:
        res.status = "timeout"
        res.notes.append(str(exc))
    except ClaimViolation as exc:
        res.fail(f"claim violated: {exc}")
    millis = int((time.monotonic() - start) * 1000)
    record = {
        "index": index,
        "input_digest": digest(case.payload),
        "status": res.status,
        "verdicts": res.verdicts,
        "witness_digests": {k: digest(v) for k, v in res.witnesses.items()},
        "nodes": res.nodes,
        "millis": millis,
    }
    if res.notes:
        record["notes"] = res.notes
    if res.status == "fail":
        record["counterexample"] = {"input": case.payload, "witnesses": res.witnesses}
    return record


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("DCUT_LAB_THREADS", "1")))
    except ValueError:
        return 1


def run_cases(battery: str, params: dict, cases: list[Case], timeout: Optional[float],
              min_conclusive: int = 0, threads: Optional[int] = None) -> VerificationReport:
    threads = threads or thread_count()
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(threads) as pool:
            records = list(pool.map(lambda ic: _execute(ic[0], ic[1], timeout), enumerate(cases)))
    else:
        records = [_execute(i, c, timeout) for i, c in enumerate(cases)]
    counts = {s: sum(r["status"] == s for r in records) for s in ("pass", "fail", "timeout")}
    if counts["fail"]:
        status = "fail"
    elif counts["timeout"] or counts["pass"] < min_conclusive:
        status = "inconclusive"
    else:
        status = "pass"
    summary = (f"{battery}: {status.upper()} - {len(records)} cases, {counts['pass']} passed, "
               f"{counts['fail']} failed, {counts['timeout']} timed out")
    return VerificationReport(battery, params, records, status, summary)


# -- case helpers ----------------------------------------------------------------

def _timed(stats: SearchStats, res: CaseResult, key: str, fn, *args):
    before = stats.nodes
    out = fn(*args, stats=stats)
    res.nodes[key] = stats.nodes - before
    return out


def _labels(f) -> Optional[list]:
    return None if f is None else list(f)


# -- batteries -------------------------------------------------------------------

def structure_cases() -> list[Case]:
    d = D_STRUCTURE
    sub = (d.index(1), d.index(3))

    def core(res, stats):
        ok = is_core(d)
        res.verdicts["is_core"] = ok
        if not ok:
            res.fail("D is not a core")

    def absent(kind):
        def run(res, stats):
            f = _timed(stats, res, kind.value, find_restricted_polymorphism, d, sub, kind, kind.arity)
            res.verdicts[kind.value] = f is not None
            if f is not None:
                res.witnesses[kind.value] = list(f)
                res.fail(f"found a polymorphism restricting to {kind.value} on {{1,3}}"
                         f" (equations hold: {satisfies_kind(f, d.m, sub, kind)})")
        return run

    cases = [Case({"check": "core"}, core)]
    for kind in PolymorphismKind:
        cases.append(Case({"check": kind.value, "arity": kind.arity, "sub": [1, 3]}, absent(kind)))
    return cases


ORACLE_SOLVERS = {
    "disconnected_cut": (lambda g, stats: find_disconnected_cut(g, stats), oracles.disconnected_cut_exists),
    "2s2_partition": (find_2s2_partition, lambda g: oracles.model_partition_exists(g, TWO_S2)),
    "2k2_partition": (find_2k2_partition, lambda g: oracles.model_partition_exists(g, TWO_K2)),
    "biclique_cover": (find_2_biclique_vertex_cover, oracles.biclique_cover_exists),
    "surjective_c4r": (find_surjective_hom_c4r, oracles.surjective_exists),
    "compaction_c4r": (find_compaction_c4r, oracles.compaction_exists),
    "biclique_contraction": (find_proper_biclique_contraction, oracles.biclique_contraction_exists),
}

WITNESS_CHECKERS = {
    "disconnected_cut": check_cut,
    "2s2_partition": lambda g, w: check_partition(g, TWO_S2, w),
    "2k2_partition": lambda g, w: check_partition(g, TWO_K2, w),
    "biclique_cover": check_biclique_cover,
    "surjective_c4r": check_surjective,
    "compaction_c4r": check_compaction,
    "biclique_contraction": check_contraction,
}


def oracle_cases(max_n: int = 5) -> list[Case]:
    def make(g):
        def run(res, stats):
            for name, (solver, oracle) in ORACLE_SOLVERS.items():
                w = _timed(stats, res, name, solver, g)
                expect = oracle(g)
                res.verdicts[name] = w is not None
                if w is not None:
                    res.witnesses[name] = w.to_json() if hasattr(w, "to_json") else list(w)
                    if not WITNESS_CHECKERS[name](g, w):
                        res.fail(f"{name}: witness fails its checker")
                if (w is not None) != expect:
                    res.fail(f"{name}: solver says {w is not None}, enumeration says {expect}")
        return run

    return [Case(graph_payload(g), make(g)) for n in range(1, max_n + 1) for g in connected_graphs(n)]


def prop1_graphs(seed: int, exhaustive_n: int = 5, random_count: int = 500,
                 n_range: tuple[int, int] = (6, 9)) -> list[Graph]:
    graphs = [g for n in range(1, exhaustive_n + 1) for g in connected_graphs(n)]
    probabilities = [Fraction(k, 8) for k in range(2, 8)]
    for idx in range(random_count):
        rng = random.Random(_subseed(seed, "prop1", idx))
        cfg = GeneratorConfig(seed=_subseed(seed, "prop1-graph", idx), graph_n=rng.randint(*n_range),
                              edge_probability=rng.choice(probabilities))
        graphs.append(gen_graph(cfg))
    return graphs


def prop1_cases(seed: int = 0, exhaustive_n: int = 5, random_count: int = 500) -> list[Case]:
    def make(g):
        def run(res, stats):
            rep = check_prop1(g, deadline=stats.deadline)
            res.verdicts.update(rep.verdicts)
            res.nodes.update(rep.nodes)
            res.witnesses.update({k: w.to_json() if hasattr(w, "to_json") else list(w)
                                  for k, w in rep.witnesses.items()})
            if not rep.agree:
                res.fail(f"statements disagree: {rep.verdicts}")
            for k, ok in rep.witness_ok.items():
                if not ok:
                    res.fail(f"{k}: witness fails its checker")
            has_cut = rep.verdicts["1_disconnected_cut"]
            if rep.diameter != math.inf and rep.diameter >= 3 and not has_cut:
                res.fail("diameter >= 3 but no disconnected cut")
            if g.n >= 2 and len(g.edges) == g.n * (g.n - 1) // 2 and has_cut:
                res.fail("complete graph with a disconnected cut")
            res.verdicts["diameter"] = rep.diameter
        return run

    return [Case(graph_payload(g), make(g)) for g in prop1_graphs(seed, exhaustive_n, random_count)]


def _dgraph_property(a: DInstance, res: CaseResult, build_sc: bool) -> None:
    d = build_d_graph(a)
    g = build_semi_compactor(d).graph if build_sc else d.graph
    diam = diameter(g)
    dominating = not g.has_edge(0, 2) and is_dominating_pair(g, 0, 2)
    res.verdicts.update({"n": g.n, "diameter": diam, "h0_h2_dominating_non_edge": dominating})
    if diam != 2:
        res.fail(f"diameter is {diam}, not 2")
    if not dominating:
        res.fail("(h0, h2) is not a dominating non-edge")


def dgraph_diameter_cases(seed: int = 0, count: int = 200, max_elements: int = 4, max_tuples: int = 6,
                          semicompactor: bool = False) -> list[Case]:
    fam = dinstance_family(seed, count, max_elements, max_tuples)
    return [Case(instance_payload(a), lambda res, stats, a=a: _dgraph_property(a, res, semicompactor)) for a in fam]


def _retraction_check(a: DInstance, res: CaseResult, stats: SearchStats) -> None:
    d = build_d_graph(a)
    f = hom_to_d(a)
    g = _timed(stats, res, "retraction", find_retraction_c4r, d.graph, d.h)
    res.verdicts["hom_to_D"] = f is not None
    res.verdicts["retracts"] = g is not None
    if (f is None) != (g is None):
        res.fail("hom to D exists iff D-graph retracts: violated")
        return
    if f is None:
        return
    res.witnesses["hom"] = f
    res.witnesses["retraction"] = list(g)
    ext = extend_hom_to_retraction(a, d, f)
    if restrict_retraction_to_hom(a, d, ext) != f:
        res.fail("restrict(extend(f)) != f")
    restrict_retraction_to_hom(a, d, g)


def retraction_cases(seed: int = 0, count: int = 200, max_elements: int = 4, max_tuples: int = 6) -> list[Case]:
    fam = dinstance_family(seed, count, max_elements, max_tuples)
    return [Case(instance_payload(a), lambda res, stats, a=a: _retraction_check(a, res, stats)) for a in fam]


def _lemma4_check(a: DInstance, res: CaseResult, stats: SearchStats) -> None:
    d = build_d_graph(a)
    sc = build_semi_compactor(d)
    g = sc.graph
    diam = diameter(g)
    res.verdicts["sc_n"] = g.n
    res.verdicts["sc_diameter"] = diam
    if diam != 2 or not is_dominating_pair(g, 0, 2) or g.has_edge(0, 2):
        res.fail(f"semi-compactor diameter {diam} / dominating non-edge property broken")
    base_r = _timed(stats, res, "retract_base", find_retraction_c4r, d.graph, d.h)
    sc_r = _timed(stats, res, "retract_sc", find_retraction_c4r, g, sc.h)
    sc_c = _timed(stats, res, "compact_sc", find_compaction_c4r, g)
    sc_s = _timed(stats, res, "surjective_sc", find_surjective_hom_c4r, g)
    verdicts = {"i_retract_base": base_r is not None, "ii_retract_sc": sc_r is not None,
                "iii_compact_sc": sc_c is not None, "iv_surjective_sc": sc_s is not None}
    res.verdicts.update(verdicts)
    if len(set(verdicts.values())) != 1:
        res.fail(f"four-way equivalence broken: {verdicts}")
    for key, f, ok in (("retract_sc", sc_r, lambda f: check_retraction(g, sc.h, f)),
                       ("compact_sc", sc_c, lambda f: check_compaction(g, f)),
                       ("surjective_sc", sc_s, lambda f: check_surjective(g, f))):
        if f is not None:
            res.witnesses[key] = list(f)
            if not ok(f):
                res.fail(f"{key}: witness fails its checker")
    if base_r is not None:
        ext = extend_retraction_to_semicompactor(sc, base_r)
        res.witnesses["table7_extension"] = list(ext)


def lemma4_cases(max_elements: int = 2, max_tuples: int = 2, extra: Sequence[DInstance] = ()) -> list[Case]:
    fam = small_instances(max_elements, max_tuples) + list(extra)
    return [Case(instance_payload(a), lambda res, stats, a=a: _lemma4_check(a, res, stats)) for a in fam]


# Distance bounds for the D-graph and the semi-compactor: cell -> (bound, witness, fallback witness).
# Witness names an h-vertex ("h0".."h3") or a vertex type; None means only the bound is claimed.
_T1_ORDER = ("h0", "h1", "h2", "h3", "l", "r", "a", "b", "c", "d")
_T1_ROWS = {
    "h0": "0 1 2:h1 1 1 1 1 2:h1 2:h3 1",
    "h1": "0 1 2:h0 2:h0 2:h0 2:h0 1 2:h2 1",
    "h2": "0 1 2:b 2:c 2:b 1 1 2:c",
    "h3": "0 2:h0 2:h0 1 2:a 1 2:c",
    "l": "2:h0 2:h0 2:h0 2:b 2:h2:c 2:h0",
    "r": "2:h0 2:h0 2:h2:b 2:c 2:h0",
    "a": "1 2:a 2:h3 2:h0",
    "b": "1 2:h2 2:h1",
    "c": "1 2:c",
    "d": "1",
}
_T2_ORDER = ("v", "u", "w", "y", "x")
_T2_ROWS = {
    "v": "2 2 2 2 2",
    "u": "1 2:w 2:h0 2:h0",
    "w": "1 2:h2 2:h2",
    "y": "2:h0 2:h0",
    "x": "2:h0",
}


def _parse_table(order, rows) -> dict:
    table = {}
    for i, r in enumerate(order):
        for j, cell in enumerate(rows[r].split()):
            c = order[i + j]
            parts = cell.split(":")
            entry = (int(parts[0]), parts[1] if len(parts) > 1 else None, parts[2] if len(parts) > 2 else None)
            table[(r, c)] = table[(c, r)] = entry
    return table


DIAMETER_TABLE_DGRAPH = _parse_table(_T1_ORDER, _T1_ROWS)
DIAMETER_TABLE_SEMICOMPACTOR = _parse_table(_T2_ORDER, _T2_ROWS)


def _cell_holds(g: Graph, types: Sequence[set], x: int, y: int, entry) -> bool:
    bound, wit, alt = entry
    if x == y:
        return True
    if g.has_edge(x, y):
        return True
    if bound == 1:
        return False

    def via(name):
        if name is None:
            return False
        if name.startswith("h"):
            z = int(name[1])
            return g.has_edge(x, z) and g.has_edge(z, y)
        return any(name in types[z] and g.has_edge(x, z) and g.has_edge(z, y) for z in range(g.n))

    if wit is None:
        return bool(g.adj_mask[x] & g.adj_mask[y])
    return via(wit) or via(alt)


def _dgraph_types(d) -> list[set]:
    types = []
    left = {d.vertex_of[e] for e in d.instance.left_elements()}
    right = {d.vertex_of[e] for e in d.instance.right_elements()}
    for v, t in enumerate(d.vtype):
        if t == "h":
            types.append({f"h{d.h.index(v)}"})
        elif t == "element":
            types.append({k for k, s in (("l", left), ("r", right)) if v in s})
        else:
            types.append({t})
    return types


def table_spot_check(a: DInstance) -> list[str]:
    """Check every applicable cell of both diameter tables on one instance; return failures."""
    problems = []
    d = build_d_graph(a)
    types = _dgraph_types(d)
    g = d.graph
    for x in range(g.n):
        for y in range(x + 1, g.n):
            for tx in types[x]:
                for ty in types[y]:
                    if not _cell_holds(g, types, x, y, DIAMETER_TABLE_DGRAPH[(tx, ty)]):
                        problems.append(f"D-graph cell ({tx},{ty}) fails at ({x},{y})")
    sc = build_semi_compactor(d)
    sg = sc.graph
    sc_types = [{"v"} for _ in range(g.n)] + [set() for _ in range(sg.n - g.n)]
    for kind, table in (("u", sc.u_of), ("w", sc.w_of), ("y", sc.y_of)):
        for c in table.values():
            sc_types[c] = {kind}
    for x, _, _ in sc.x_vertices:
        sc_types[x] = {"x"}
    for x in range(sg.n):
        for y in range(x + 1, sg.n):
            (tx,), (ty,) = sc_types[x], sc_types[y]
            if not _cell_holds(sg, sc_types, x, y, DIAMETER_TABLE_SEMICOMPACTOR[(tx, ty)]):
                problems.append(f"semi-compactor cell ({tx},{ty}) fails at ({x},{y})")
    return problems


def table_cases(seed: int = 0, spot_count: int = 50) -> list[Case]:
    cases = []
    d_pairs = [r.tuples for r in D_STRUCTURE.relations]
    to_ix = {lab: i for i, lab in enumerate(D_STRUCTURE.labels)}

    for rel, rows in RETRACTION_TABLES.items():
        def rows_match(res, stats, rel=rel, rows=rows):
            listed = {(to_ix[p], to_ix[q]) for p, q in rows}
            res.verdicts["rows_equal_relation"] = listed == set(d_pairs[rel - 1])
            if listed != set(d_pairs[rel - 1]):
                res.fail(f"table for R{rel} does not list exactly S{rel}")
        cases.append(Case({"table": f"R{rel}", "check": "rows"}, rows_match))
        for (fp, fq), row in rows.items():
            def one_row(res, stats, rel=rel, fp=fp, fq=fq, row=row):
                a = DInstance.make(["p", "q"], *[[("p", "q")] if i == rel else [] for i in range(1, 5)])
                d = build_d_graph(a)
                g = extend_hom_to_retraction(a, d, {"p": fp, "q": fq})
                got = tuple(g[v] for v in d.gadgets_for(rel, 0, "p", "q"))
                res.verdicts["row"] = list(row)
                if got != row:
                    res.fail(f"extension gave {got}, table row says {row}")
            cases.append(Case({"table": f"R{rel}", "p": fp, "q": fq}, one_row))

    for key, row in EXTENSION_TABLE.items():
        def t7(res, stats, key=key, row=row):
            gv, gv2 = key
            uv, wv, yv = forced_companions(gv)
            uv2, wv2, yv2 = forced_companions(gv2)
            derived = (uv, uv2, wv, wv2, yv, yv2, x_candidates(gv, gv2))
            res.verdicts["candidates"] = sorted(row[6])
            if derived != row:
                res.fail(f"row {key}: derived {derived}, table says {row}")
            empty = not (row[6] & {1, 3})
            if empty != (key in IMPOSSIBLE_ROWS):
                res.fail(f"row {key}: h1/h3 availability disagrees with the impossible-row list")
        cases.append(Case({"table": "extension", "row": list(key)}, t7))

    for i, a in enumerate(dinstance_family(seed, spot_count, 3, 4)):
        def spot(res, stats, a=a):
            bad = table_spot_check(a)
            res.verdicts["cells_failing"] = len(bad)
            for b in bad[:10]:
                res.fail(b)
        cases.append(Case(instance_payload(a), spot))
    return cases


R1_FIXTURE = DInstance.make(["p", "q"], r1=[("p", "q")])


def contrast_cases() -> list[Case]:
    def run(res, stats):
        d = build_d_graph(R1_FIXTURE)
        dc = diameter(build_compactor(d.graph, d.h))
        ds = diameter(build_semi_compactor(d).graph)
        res.verdicts.update({"compactor_diameter": dc, "semicompactor_diameter": ds})
        if dc != 3 or ds != 2:
            res.fail(f"expected compactor diameter 3 and semi-compactor 2, got {dc} and {ds}")
    return [Case(instance_payload(R1_FIXTURE), run)]


def run_battery(name: str, seed: int = 0, timeout: Optional[float] = DEFAULT_CASE_TIMEOUT,
                threads: Optional[int] = None, **opts) -> VerificationReport:
    """Build and run one battery. ``opts`` carries battery-specific size flags."""
    params = {"seed": seed, **opts}
    min_conclusive = 0
    if name == "structure":
        cases = structure_cases()
    elif name == "oracle":
        cases = oracle_cases(opts.get("max_n", 5))
    elif name == "prop1":
        cases = prop1_cases(seed, opts.get("exhaustive_n", 5), opts.get("random_count", 500))
    elif name in ("dgraph-diameter", "semicompactor-diameter"):
        cases = dgraph_diameter_cases(seed, opts.get("count", 200), opts.get("max_elements", 4),
                                      opts.get("max_tuples", 6), semicompactor=name.startswith("semi"))
    elif name == "retraction":
        cases = retraction_cases(seed, opts.get("count", 200), opts.get("max_elements", 4), opts.get("max_tuples", 6))
    elif name == "lemma4":
        extra = dinstance_family(seed, opts.get("extra_count", 0), 3, 3)
        cases = lemma4_cases(opts.get("max_elements", 2), opts.get("max_tuples", 2), extra)
        min_conclusive = opts.get("min_conclusive", LEMMA4_MIN_CONCLUSIVE)
    elif name == "tables":
        cases = table_cases(seed, opts.get("spot_count", 50))
    elif name == "contrast":
        cases = contrast_cases()
    else:
        raise InputError(f"unknown battery {name!r}; choose from {', '.join(BATTERIES)}")
    return run_cases(name, params, cases, timeout, min_conclusive, threads)
