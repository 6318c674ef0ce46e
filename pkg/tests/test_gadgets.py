import json

import pytest

from dcut_lab.errors import ClaimViolation, InputError
from dcut_lab.gadgets import (
    EXTENSION_ROW_NUMBER,
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
    instance_structure,
    reduce_instance,
    restrict_retraction_to_hom,
    x_candidates,
)
from dcut_lab.graph import Graph, cycle_graph, diameter, is_dominating_pair
from dcut_lab.harness import dinstance_family
from dcut_lab.problems import check_retraction, find_retraction_c4r
from dcut_lab.relational import D_STRUCTURE, is_homomorphism

R1 = DInstance.make(["p", "q"], r1=[("p", "q")])
FAMILY = dinstance_family(7, 40)


def single(rel, fp, fq):
    """Instance with one pair in ``rel`` plus the hom ``p -> fp, q -> fq``."""
    a = DInstance.make(["p", "q"], **{f"r{rel}": [("p", "q")]})
    return a, {"p": fp, "q": fq}


def gadget_images(a, f):
    d = build_d_graph(a)
    g = extend_hom_to_retraction(a, d, f)
    return tuple(g[v] for v in d.gadgets_for(*next(iter(a.pairs()))))


# -- instances -------------------------------------------------------------------

def test_instance_json_round_trip():
    assert DInstance.from_json(R1.to_json()) == R1


@pytest.mark.parametrize("text", ['{"elements": ["p"], "R1": [["p", "z"]]}', "[]", "{"])
def test_instance_json_errors(text):
    with pytest.raises(InputError):
        DInstance.from_json(text)


def test_instance_structure_and_hom():
    s = instance_structure(R1)
    assert s.signature == D_STRUCTURE.signature
    f = hom_to_d(R1)
    assert (f["p"], f["q"]) in {(0, 3), (1, 1), (3, 1), (3, 3)}


# -- D-graph ---------------------------------------------------------------------

def test_r1_counts_and_edges():
    d = build_d_graph(R1)
    assert (d.graph.n, len(d.graph.edges)) == (10, 22)
    p, q = d.vertex_of["p"], d.vertex_of["q"]
    ap, bp, cq, dq = d.gadgets_for(1, 0, "p", "q")
    expected = {
        (0, 1), (1, 2), (2, 3), (0, 3),
        (0, ap), (3, ap), (1, bp), (2, bp), (2, cq), (3, cq), (0, dq), (1, dq),
        (ap, p), (bp, p), (cq, q), (dq, q), (ap, bp), (cq, dq),
        (0, p), (0, q), (cq, p), (2, q),
    }
    assert d.graph.edges == {(min(e), max(e)) for e in expected}


def test_reflexive_pair_gets_all_four_gadgets():
    d = build_d_graph(DInstance.make(["p"], r3=[("p", "p")]))
    assert sorted(d.vtype[4:]) == ["a", "b", "c", "d", "element"]
    assert set(d.owner.values()) == {"p"}


def test_isolated_element_rejected():
    with pytest.raises(InputError):
        build_d_graph(DInstance.make(["p", "q", "z"], r1=[("p", "q")]))


@pytest.mark.parametrize("a", FAMILY[:20])
def test_dgraph_invariants(a):
    d = build_d_graph(a)
    g = d.graph
    assert d.h == (0, 1, 2, 3)
    sub = {e for e in g.edges if e[1] < 4}
    assert sub == set(cycle_graph(4).edges)
    for v, t in enumerate(d.vtype):
        if t == "element":
            assert g.has_edge(0, v)
        for h, tt in ((0, "a"), (3, "a"), (1, "b"), (2, "b"), (2, "c"), (3, "c"), (0, "d"), (1, "d")):
            if t == tt:
                assert g.has_edge(h, v)
    for t in "abcd":
        same = [v for v, tt in enumerate(d.vtype) if tt == t]
        assert all(g.has_edge(x, y) for x in same for y in same if x < y)
    assert diameter(g) == 2 and is_dominating_pair(g, 0, 2) and not g.has_edge(0, 2)


def test_per_tuple_variant_duplicates_gadgets():
    a = DInstance.make(["p", "q"], r1=[("p", "q")], r2=[("p", "q")])
    assert build_d_graph(a).graph.n == 10
    assert build_d_graph(a, per_tuple=True).graph.n == 14


# -- retraction tables --------------------------------------------------------------

def test_table_examples():
    assert gadget_images(*single(1, 0, 3)) == (0, 1, 3, 0)
    assert gadget_images(*single(2, 3, 1)) == (3, 2, 2, 1)
    assert gadget_images(*single(4, 1, 1)) == (0, 1, 2, 1)


@pytest.mark.parametrize("rel", [1, 2, 3, 4])
def test_tables_cover_the_relation(rel):
    name = f"S{rel}"
    pairs = {(D_STRUCTURE.label(x), D_STRUCTURE.label(y)) for x, y in D_STRUCTURE.relation(name).tuples}
    assert set(RETRACTION_TABLES[rel]) == pairs
    for fp, fq in pairs:
        a, f = single(rel, fp, fq)
        d = build_d_graph(a)
        assert check_retraction(d.graph, d.h, extend_hom_to_retraction(a, d, f))


def test_extend_rejects_non_hom():
    a, _ = single(3, 0, 0)
    with pytest.raises(InputError):
        extend_hom_to_retraction(a, build_d_graph(a), {"p": 0, "q": 0})


def test_diagonal_instance_has_no_retraction():
    a = DInstance.make(["p"], r3=[("p", "p")], r4=[("p", "p")])
    assert hom_to_d(a) is None
    d = build_d_graph(a)
    assert find_retraction_c4r(d.graph, d.h) is None


@pytest.mark.parametrize("a", FAMILY)
def test_retraction_theorem_and_round_trip(a):
    d = build_d_graph(a)
    f = hom_to_d(a)
    r = find_retraction_c4r(d.graph, d.h)
    assert (f is None) == (r is None)
    if f is not None:
        g = extend_hom_to_retraction(a, d, f)
        assert check_retraction(d.graph, d.h, g)
        assert restrict_retraction_to_hom(a, d, g) == f
        back = restrict_retraction_to_hom(a, d, r)
        struct = instance_structure(a)
        image = [D_STRUCTURE.index(back[e]) for e in a.elements]
        assert is_homomorphism(struct, D_STRUCTURE, image)


def test_r1_restricted_pair_lies_in_s1():
    d = build_d_graph(R1)
    f = restrict_retraction_to_hom(R1, d, find_retraction_c4r(d.graph, d.h))
    assert (f["p"], f["q"]) in {(0, 3), (1, 1), (3, 1), (3, 3)}


# -- compactor and semi-compactor ------------------------------------------------------

def test_compactor_single_vertex():
    g = Graph(5, list(cycle_graph(4).edges) + [(0, 4)])
    c = build_compactor(g, (0, 1, 2, 3))
    assert c.n == 8


def test_compactor_one_x_of_degree_four():
    g = Graph(6, list(cycle_graph(4).edges) + [(0, 4), (0, 5), (4, 5)])
    c = build_compactor(g, (0, 1, 2, 3))
    assert c.n == 6 + 6 + 1
    assert c.degree(12) == 4


def test_compactor_rejects_bad_embedding():
    with pytest.raises(InputError):
        build_compactor(cycle_graph(5), (0, 1, 2, 3))


def test_r1_contrast():
    d = build_d_graph(R1)
    assert diameter(build_compactor(d.graph, d.h)) == 3
    assert diameter(build_semi_compactor(d).graph) == 2


def test_r1_semicompactor_shape():
    sc = reduce_instance(R1)
    assert sc.graph.n == 35
    assert len(sc.x_vertices) == 7
    d = sc.base
    p = d.vertex_of["p"]
    cq = d.gadgets_for(1, 0, "p", "q")[2]
    assert (p, cq) in {(t, h) for _, t, h in sc.x_vertices}


def _sc_invariants(sc):
    g, d = sc.graph, sc.base
    for v in sc.u_of:
        u, w, y = sc.u_of[v], sc.w_of[v], sc.y_of[v]
        for a, b in ((0, u), (0, y), (1, u), (2, w), (2, y), (3, w), (u, v), (u, w), (u, y), (v, w), (w, y)):
            assert g.has_edge(a, b)
    for table in (sc.u_of, sc.w_of):
        cs = list(table.values())
        assert all(g.has_edge(a, b) for a in cs for b in cs if a < b)
    for x, tail, head in sc.x_vertices:
        assert g.adj[x] == {tail, head, sc.u_of[tail], sc.w_of[head], 0, 2}
        tt, th = d.vtype[tail], d.vtype[head]
        assert not (tt == th and tt in "abcd")
    assert diameter(g) == 2 and is_dominating_pair(g, 0, 2) and not g.has_edge(0, 2)


@pytest.mark.parametrize("a", FAMILY[:20])
def test_semicompactor_invariants(a):
    _sc_invariants(build_semi_compactor(build_d_graph(a)))


def test_no_x_between_a_vertices():
    a = DInstance.make(["p", "q", "r"], r1=[("p", "q"), ("r", "q")])
    sc = reduce_instance(a)
    assert len(a.left_elements()) >= 2
    _sc_invariants(sc)


# -- companion choice for x vertices ------------------------------------------

def test_x_choice_table_examples():
    assert EXTENSION_TABLE[(0, 1)][:6] == (0, 1, 3, 2, 3, 1)
    assert forced_companions(0) == (0, 3, 3) and forced_companions(1) == (1, 2, 1)
    assert x_candidates(3, 2) & {1, 3} == {3}
    assert x_candidates(2, 2) & {1, 3} == {1}
    assert EXTENSION_ROW_NUMBER[(0, 1)] == 2
    assert EXTENSION_ROW_NUMBER[(3, 2)] == 11
    assert EXTENSION_ROW_NUMBER[(2, 2)] == 8


def test_x_choice_table_rederived():
    for key, row in EXTENSION_TABLE.items():
        gv, gv2 = key
        u, w, y = forced_companions(gv)
        u2, w2, y2 = forced_companions(gv2)
        assert row[:6] == (u, u2, w, w2, y, y2)
        assert row[6] == x_candidates(gv, gv2)
    for key in IMPOSSIBLE_ROWS:
        assert not x_candidates(*key) & {1, 3}


@pytest.mark.parametrize("a", FAMILY)
def test_x_choice_table_extension_validates(a):
    d = build_d_graph(a)
    r = find_retraction_c4r(d.graph, d.h)
    if r is None:
        return
    sc = build_semi_compactor(d)
    ext = extend_retraction_to_semicompactor(sc, r)
    assert check_retraction(sc.graph, sc.h, ext)
    rows = {(r[t], r[h]) for _, t, h in sc.x_vertices}
    assert not rows & set(IMPOSSIBLE_ROWS)


def test_extension_rejects_non_retraction():
    sc = reduce_instance(R1)
    with pytest.raises(InputError):
        extend_retraction_to_semicompactor(sc, [0] * sc.base.graph.n)


def test_labels_json_is_serialisable():
    sc = reduce_instance(R1)
    rows = sc.labels_json()
    assert [r["id"] for r in rows] == list(range(35))
    json.dumps(rows)


def test_impossible_row_raises():
    sc = reduce_instance(R1)
    d = sc.base
    r = list(find_retraction_c4r(d.graph, d.h))
    _, tail, head = sc.x_vertices[0]
    r[tail], r[head] = IMPOSSIBLE_ROWS[0]
    # a labelling that would hit an impossible row is never a base retraction
    with pytest.raises((ClaimViolation, InputError)):
        extend_retraction_to_semicompactor(sc, r)
