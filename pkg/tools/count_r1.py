"""Count vertices and edges for the single-tuple instance ({p, q}, R1 = {(p, q)}).

Standalone: it does not import dcut_lab. Vertices are named by strings and
the edge set is written out rule by rule, so the totals can be compared
against the package builders.
"""

from itertools import combinations


def dgraph():
    h = ["h0", "h1", "h2", "h3"]
    verts = h + ["p", "q", "a_p", "b_p", "c_q", "d_q"]
    edges = {frozenset(e) for e in (("h0", "h1"), ("h1", "h2"), ("h2", "h3"), ("h3", "h0"))}
    anchors = {"a_p": ("h0", "h3", "p"), "b_p": ("h1", "h2", "p"),
               "c_q": ("h2", "h3", "q"), "d_q": ("h0", "h1", "q")}
    for g, nbrs in anchors.items():
        edges |= {frozenset((g, x)) for x in nbrs}
    edges |= {frozenset(("a_p", "b_p")), frozenset(("c_q", "d_q"))}
    edges |= {frozenset(("h0", "p")), frozenset(("h0", "q"))}
    # the R1 pair (p, q): c_q sees p, q sees h2
    edges |= {frozenset(("c_q", "p")), frozenset(("q", "h2"))}
    return verts, edges


def semicompactor():
    verts, edges = dgraph()
    h = {"h0", "h1", "h2", "h3"}
    gadget = {"a_p", "b_p", "c_q", "d_q"}
    non_h = [v for v in verts if v not in h]
    companions = [f"{k}_{v}" for k in "uwy" for v in non_h]
    # one x per edge off H, except inside a same-type gadget clique (singletons here)
    x_edges = [e for e in edges if not e & h]
    x_edges = [e for e in x_edges if not (e <= gadget and len({v[0] for v in e}) == 1)]
    xs = [f"x_{'_'.join(sorted(e))}" for e in x_edges]
    return verts + companions + xs, x_edges


def main():
    verts, edges = dgraph()
    sc_verts, x_edges = semicompactor()
    assert len({frozenset(p) for p in combinations(verts, 2)} & edges) == len(edges)
    print(f"dgraph: {len(verts)} vertices, {len(edges)} edges")
    print(f"semicompactor: {len(sc_verts)} vertices ({len(x_edges)} x vertices)")
    return len(verts), len(edges), len(sc_verts)


if __name__ == "__main__":
    main()
