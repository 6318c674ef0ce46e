import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcut_lab import oracles
from dcut_lab.errors import InputError
from dcut_lab.gadgets import DInstance, build_d_graph
from dcut_lab.graph import (
    TWO_K2,
    Graph,
    complement,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    diameter,
    is_connected,
    path_graph,
)
from dcut_lab.harness import ORACLE_SOLVERS, WITNESS_CHECKERS, connected_graphs
from dcut_lab.problems import (
    BicliqueCoverWitness,
    ContractionWitness,
    CutWitness,
    PartitionWitness,
    check_biclique_cover,
    check_c4r_hom,
    check_compaction,
    check_contraction,
    check_cut,
    check_partition,
    check_prop1,
    check_retraction,
    check_surjective,
    disconnected_cut_by_subsets,
    find_2_biclique_vertex_cover,
    find_2k2_partition,
    find_2s2_partition,
    find_compaction_c4r,
    find_disconnected_cut,
    find_model_partition,
    find_proper_biclique_contraction,
    find_retraction_c4r,
    find_surjective_hom_c4r,
)

P4 = path_graph(4)
C4 = cycle_graph(4)
K4 = complete_graph(4)
STAR = complete_bipartite(1, 3)
TWO_EDGES = Graph(4, [(0, 1), (2, 3)])


def fs(*xs):
    return frozenset(xs)


# -- disconnected cut ----------------------------------------------------------

def test_p4_cut_is_0_2():
    w = find_disconnected_cut(P4)
    assert w == CutWitness(fs(0, 2))
    assert check_cut(P4, w)


def test_star_has_no_cut():
    assert find_disconnected_cut(STAR) is None
    assert disconnected_cut_by_subsets(STAR) is None


def test_c4_cut_is_an_opposite_pair():
    w = find_disconnected_cut(C4)
    assert w.u in (fs(0, 2), fs(1, 3))


def test_cut_rejects_disconnected_input():
    with pytest.raises(InputError):
        find_disconnected_cut(TWO_EDGES)


def test_cut_checker_rejects_bad_sets():
    assert not check_cut(P4, CutWitness(fs(0, 1)))
    assert not check_cut(P4, CutWitness(fs()))


# -- partitions ----------------------------------------------------------------

def test_2k2_graph_partitions_itself():
    w = find_model_partition(TWO_EDGES, TWO_K2)
    assert w is not None and check_partition(TWO_EDGES, TWO_K2, w)


def test_c4_2k2_example():
    assert check_partition(C4, TWO_K2, PartitionWitness((fs(0), fs(2), fs(1), fs(3))))
    assert find_2k2_partition(C4) is not None


def test_2s2_of_two_edges():
    assert find_2s2_partition(TWO_EDGES) is not None


def test_k3_has_no_partition():
    k3 = complete_graph(3)
    assert find_2k2_partition(k3) is None
    assert find_2s2_partition(k3) is None


def test_partition_checker_needs_nonempty_blocks():
    assert not check_partition(C4, TWO_K2, PartitionWitness((fs(0, 1), fs(), fs(2), fs(3))))


# -- biclique cover ------------------------------------------------------------

def test_k22_cover():
    k22 = complete_bipartite(2, 2)
    w = BicliqueCoverWitness((fs(0), fs(2)), (fs(1), fs(3)))
    assert check_biclique_cover(k22, w)
    found = find_2_biclique_vertex_cover(k22)
    assert found is not None and check_biclique_cover(k22, found)


def test_k2_has_no_cover():
    assert find_2_biclique_vertex_cover(complete_graph(2)) is None


def test_two_edges_cover():
    w = find_2_biclique_vertex_cover(TWO_EDGES)
    assert w is not None and check_biclique_cover(TWO_EDGES, w)


def test_cover_checker_rejects_missing_cross_edge():
    w = BicliqueCoverWitness((fs(0), fs(2)), (fs(1), fs(3)))
    assert not check_biclique_cover(P4, w)


# -- reflexive 4-cycle targets -------------------------------------------------

def test_p4_surjective():
    assert check_surjective(P4, (0, 1, 2, 3))
    f = find_surjective_hom_c4r(P4)
    assert f is not None and check_surjective(P4, f)


def test_k4_not_surjective_or_compactable():
    assert find_surjective_hom_c4r(K4) is None
    assert find_compaction_c4r(K4) is None


def test_loops_impose_nothing():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)], loops=[1])
    assert find_surjective_hom_c4r(g) is not None


def test_c4_retract_identity():
    assert find_retraction_c4r(C4, (0, 1, 2, 3)) == (0, 1, 2, 3)


def test_retract_needs_induced_cycle():
    with pytest.raises(InputError):
        find_retraction_c4r(K4, (0, 1, 2, 3))
    with pytest.raises(InputError):
        find_retraction_c4r(C4, (0, 1, 2, 2))


def test_retract_on_dgraphs():
    diag = DInstance.make(["p"], r3=[("p", "p")], r4=[("p", "p")])
    d = build_d_graph(diag)
    assert find_retraction_c4r(d.graph, d.h) is None
    r1 = DInstance.make(["p", "q"], r1=[("p", "q")])
    d = build_d_graph(r1)
    f = find_retraction_c4r(d.graph, d.h)
    assert f is not None and check_retraction(d.graph, d.h, f)


def test_c4_compaction_identity():
    assert check_compaction(C4, (0, 1, 2, 3))
    f = find_compaction_c4r(C4)
    assert f is not None and check_compaction(C4, f)


def test_compaction_is_stronger_than_surjective():
    # P4 labelled 0,1,2,3 misses the cycle edge h3h0, and no labelling of P4 can hit all four
    assert not check_compaction(P4, (0, 1, 2, 3))
    assert find_compaction_c4r(P4) is None
    assert find_surjective_hom_c4r(P4) is not None


def test_hom_checker():
    assert check_c4r_hom(C4, (0, 1, 2, 3))
    assert not check_c4r_hom(Graph(2, [(0, 1)]), (0, 2))


# -- contraction ---------------------------------------------------------------

def test_k22_contracts_to_itself():
    w = find_proper_biclique_contraction(complete_bipartite(2, 2))
    assert w is not None and all(len(b) == 1 for b in w.blocks)


def test_c5_contracts():
    w = find_proper_biclique_contraction(cycle_graph(5))
    assert w is not None and check_contraction(cycle_graph(5), w)
    assert sorted(len(b) for b in w.blocks) == [1, 1, 1, 2]


def test_k4_does_not_contract():
    assert find_proper_biclique_contraction(K4) is None


def test_contraction_bound():
    with pytest.raises(InputError):
        find_proper_biclique_contraction(path_graph(13))


def test_contraction_checker_rejects_disconnected_block():
    w = ContractionWitness((fs(0, 2), fs(1), fs(3)), (0, 1, 1))
    assert not check_contraction(C4, w)


# -- equivalences --------------------------------------------------------------

def test_prop1_examples():
    rep = check_prop1(P4)
    assert rep.agree and set(rep.verdicts.values()) == {True} and len(rep.verdicts) == 5
    rep = check_prop1(STAR)
    assert rep.agree and set(rep.verdicts.values()) == {False} and len(rep.verdicts) == 7
    rep = check_prop1(C4)
    assert rep.agree and set(rep.verdicts.values()) == {True} and len(rep.verdicts) == 7
    assert not rep.failure


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_diameter_boundary(n):
    assert find_disconnected_cut(complete_graph(n)) is None
    for g in connected_graphs(n):
        if diameter(g) >= 3:
            assert find_disconnected_cut(g) is not None


def test_2k2_2s2_duality_exhaustive():
    for n in range(1, 6):
        for g in connected_graphs(n):
            assert (find_2k2_partition(g) is None) == (find_2s2_partition(complement(g)) is None)


@st.composite
def connected(draw, lo=6, hi=8):
    n = draw(st.integers(lo, hi))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    # a random spanning path keeps it connected
    order = draw(st.permutations(range(n)))
    edges = {p for p, keep in zip(pairs, chosen) if keep}
    edges |= {(min(a, b), max(a, b)) for a, b in zip(order, order[1:])}
    return Graph(n, edges)


@settings(max_examples=40, deadline=None)
@given(connected())
def test_solvers_match_oracles_on_larger_graphs(g):
    assert is_connected(g)
    for key, (solve, oracle) in ORACLE_SOLVERS.items():
        w = solve(g, stats=None)
        assert (w is not None) == oracle(g), key
        if w is not None:
            assert WITNESS_CHECKERS[key](g, w), key


@settings(max_examples=40, deadline=None)
@given(connected(4, 9))
def test_subset_oracle_agrees(g):
    assert (find_disconnected_cut(g) is None) == (disconnected_cut_by_subsets(g) is None)
    assert (disconnected_cut_by_subsets(g) is None) == (not oracles.disconnected_cut_exists(g))


@settings(max_examples=40, deadline=None)
@given(connected(4, 8))
def test_prop1_random(g):
    assert not check_prop1(g).failure


def test_rgs_count():
    # Bell numbers
    assert [sum(1 for _ in oracles.set_partitions(n)) for n in range(6)] == [1, 1, 2, 5, 15, 52]


@st.composite
def any_graph(draw):
    n = draw(st.integers(1, 8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    loops = draw(st.sets(st.integers(0, n - 1)))
    return Graph(n, edges, loops=loops)


@settings(max_examples=150, deadline=None)
@given(any_graph())
def test_c4_modes_match_oracles_without_preconditions(g):
    # sparse, disconnected and looped inputs are where compaction and surjectivity part ways
    s = find_surjective_hom_c4r(g)
    c = find_compaction_c4r(g)
    assert (s is not None) == oracles.surjective_exists(g)
    assert (c is not None) == oracles.compaction_exists(g)
    if c is not None:
        assert check_compaction(g, c) and s is not None
