"""Gadget graphs for the hardness pipeline: D-instance -> D-graph -> semi-compactor.

Vertex numbering of a D-graph is fixed: h0..h3 are 0..3, then one vertex per
element in instance order, then the a-, b-, c- and d-blocks. An element of
left type (first entry of some pair) gets an a- and b-gadget, an element of
right type gets a c- and d-gadget; gadgets are shared by all pairs that
mention the element. ``per_tuple=True`` instead gives every pair its own
four gadgets; that mode is for experiments and carries no guarantees.

Labels 0..3 in mappings stand for h0..h3 throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Mapping, Optional, Sequence

from .errors import ClaimViolation, InputError
from .graph import Graph, cycle_graph
from .problems import check_c4r_hom, check_retraction
from .relational import D_STRUCTURE, Relation, Structure

__all__ = [
    "DInstance",
    "DGraph",
    "SemiCompactor",
    "RETRACTION_TABLES",
    "EXTENSION_TABLE",
    "build_d_graph",
    "build_semi_compactor",
    "build_compactor",
    "reduce_instance",
    "extend_hom_to_retraction",
    "restrict_retraction_to_hom",
    "extend_retraction_to_semicompactor",
    "forced_companions",
    "x_candidates",
    "instance_structure",
    "hom_to_d",
]

GADGET_TYPES = ("a", "b", "c", "d")
# h-vertices each gadget type is joined to
GADGET_ANCHORS = {"a": (0, 3), "b": (1, 2), "c": (2, 3), "d": (0, 1)}

# (f(p), f(q)) as h-indices -> images of (a_p, b_p, c_q, d_q), one table per relation.
RETRACTION_TABLES: dict[int, dict[tuple[int, int], tuple[int, int, int, int]]] = {
    1: {(0, 3): (0, 1, 3, 0), (1, 1): (0, 1, 2, 1), (3, 1): (3, 2, 2, 1), (3, 3): (3, 2, 3, 0)},
    2: {(1, 0): (0, 1, 3, 0), (1, 1): (0, 1, 2, 1), (3, 1): (3, 2, 2, 1), (3, 3): (3, 2, 3, 0)},
    3: {(1, 3): (0, 1, 3, 0), (3, 1): (3, 2, 2, 1), (3, 3): (3, 2, 3, 0)},
    4: {(1, 1): (0, 1, 2, 1), (1, 3): (0, 1, 3, 0), (3, 1): (3, 2, 2, 1)},
}

# (g(v), g(v')) -> (u_v, u_v', w_v, w_v', y_v, y_v', candidate images of x_vv')
EXTENSION_TABLE: dict[tuple[int, int], tuple[int, int, int, int, int, int, frozenset]] = {
    (0, 0): (0, 0, 3, 3, 3, 3, frozenset({0, 3})),
    (0, 1): (0, 1, 3, 2, 3, 1, frozenset({1})),
    (0, 3): (0, 0, 3, 3, 3, 3, frozenset({0, 3})),
    (1, 0): (1, 0, 2, 3, 1, 3, frozenset({0})),
    (1, 1): (1, 1, 2, 2, 1, 1, frozenset({1, 2})),
    (1, 2): (1, 1, 2, 2, 1, 1, frozenset({1, 2})),
    (2, 1): (1, 1, 2, 2, 1, 1, frozenset({1, 2})),
    (2, 2): (1, 1, 2, 2, 1, 1, frozenset({1, 2})),
    (2, 3): (1, 0, 2, 3, 1, 3, frozenset({2})),
    (3, 0): (0, 0, 3, 3, 3, 3, frozenset({0, 3})),
    (3, 2): (0, 1, 3, 2, 3, 1, frozenset({3})),
    (3, 3): (0, 0, 3, 3, 3, 3, frozenset({0, 3})),
}
EXTENSION_ROW_NUMBER = {key: i + 1 for i, key in enumerate(EXTENSION_TABLE)}
IMPOSSIBLE_ROWS = ((1, 0), (2, 3))


@dataclass(frozen=True)
class DInstance:
    elements: tuple
    relations: tuple  # four tuples of (p, q) pairs, R1..R4

    def __post_init__(self):
        elements = tuple(self.elements)
        if len(set(elements)) != len(elements):
            raise InputError("duplicate element ids")
        rels = tuple(self.relations)
        if len(rels) != 4:
            raise InputError("a D-instance has exactly four relations")
        known = set(elements)
        clean = []
        for i, rel in enumerate(rels, 1):
            pairs = tuple(dict.fromkeys(tuple(p) for p in rel))
            for pair in pairs:
                if len(pair) != 2 or any(x not in known for x in pair):
                    raise InputError(f"R{i}: pair {pair} uses unknown elements")
            clean.append(pairs)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "relations", tuple(clean))

    @classmethod
    def make(cls, elements, r1=(), r2=(), r3=(), r4=()) -> "DInstance":
        return cls(tuple(elements), (tuple(r1), tuple(r2), tuple(r3), tuple(r4)))

    def pairs(self):
        """All ``(relation number, index, p, q)`` in listing order."""
        for i, rel in enumerate(self.relations, 1):
            for k, (p, q) in enumerate(rel):
                yield i, k, p, q

    def left_elements(self) -> list:
        left = {p for _, _, p, _ in self.pairs()}
        return [e for e in self.elements if e in left]

    def right_elements(self) -> list:
        right = {q for _, _, _, q in self.pairs()}
        return [e for e in self.elements if e in right]

    def to_json(self) -> str:
        obj = {"elements": list(self.elements)}
        for i, rel in enumerate(self.relations, 1):
            obj[f"R{i}"] = [list(p) for p in rel]
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "DInstance":
        try:
            obj = json.loads(text)
            return cls.make(obj["elements"], *(obj.get(f"R{i}", []) for i in range(1, 5)))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InputError(f"malformed D-instance JSON: {exc}") from None


def instance_structure(a: DInstance) -> Structure:
    """The instance as a structure over element indices, signature-compatible with D."""
    ix = {e: i for i, e in enumerate(a.elements)}
    rels = tuple(
        Relation(f"S{i}", 2, frozenset((ix[p], ix[q]) for p, q in rel))
        for i, rel in enumerate(a.relations, 1)
    )
    return Structure(len(a.elements), rels, a.elements)


def hom_to_d(a: DInstance) -> Optional[dict]:
    """A homomorphism to D as ``{element: label in {0, 1, 3}}``, or ``None``."""
    from .relational import find_homomorphism

    f = find_homomorphism(instance_structure(a), D_STRUCTURE)
    if f is None:
        return None
    return {e: D_STRUCTURE.labels[f[i]] for i, e in enumerate(a.elements)}


@dataclass(frozen=True)
class DGraph:
    graph: Graph
    instance: DInstance
    h: tuple[int, int, int, int]
    vertex_of: Mapping[Hashable, int]  # element -> vertex
    vtype: tuple[str, ...]  # per vertex: "h", "element", "a", "b", "c", "d"
    owner: Mapping[int, Hashable]  # gadget vertex -> element it decorates
    gadget: Mapping[tuple, int]  # (type, key) -> vertex
    per_tuple: bool = False

    def gadgets_for(self, rel: int, idx: int, p, q) -> tuple[int, int, int, int]:
        """Vertices ``(a_p, b_p, c_q, d_q)`` serving the pair at ``(rel, idx)``."""
        kp = (rel, idx, p) if self.per_tuple else p
        kq = (rel, idx, q) if self.per_tuple else q
        g = self.gadget
        return g[("a", kp)], g[("b", kp)], g[("c", kq)], g[("d", kq)]

    def labels_json(self) -> list[dict]:
        elem = {v: e for e, v in self.vertex_of.items()}
        out = []
        for v, t in enumerate(self.vtype):
            rec: dict = {"id": v, "type": t}
            if t == "h":
                rec["h_index"] = self.h.index(v)
            elif t == "element":
                rec["element"] = elem[v]
            else:
                rec["owner"] = self.owner[v]
            out.append(rec)
        return out


def build_d_graph(a: DInstance, per_tuple: bool = False) -> DGraph:
    used = {x for _, _, p, q in a.pairs() for x in (p, q)}
    isolated = [e for e in a.elements if e not in used]
    if isolated:
        raise InputError(f"elements in no pair: {isolated}")

    vtype = ["h"] * 4
    edges: set[tuple[int, int]] = set(cycle_graph(4).edges)
    vertex_of = {}
    for e in a.elements:
        vertex_of[e] = len(vtype)
        vtype.append("element")

    gadget: dict[tuple, int] = {}
    owner: dict[int, Hashable] = {}
    if per_tuple:
        keys = {
            side: [((i, k, p if side == "l" else q), p if side == "l" else q) for i, k, p, q in a.pairs()]
            for side in ("l", "r")
        }
    else:
        keys = {"l": [(e, e) for e in a.left_elements()], "r": [(e, e) for e in a.right_elements()]}
    for t in GADGET_TYPES:
        for key, elem in keys["l" if t in "ab" else "r"]:
            v = len(vtype)
            gadget[(t, key)] = v
            owner[v] = elem
            vtype.append(t)

    def add(u, v):
        if u == v:
            raise ClaimViolation(f"construction produced a self pair at {u}")
        edges.add((min(u, v), max(u, v)))

    for t in GADGET_TYPES:
        for (tt, key), v in gadget.items():
            if tt == t:
                for h in GADGET_ANCHORS[t]:
                    add(v, h)
                add(v, vertex_of[owner[v]])
    for (t, key), v in gadget.items():
        if t == "a":
            add(v, gadget[("b", key)])
        elif t == "c":
            add(v, gadget[("d", key)])
    for e in a.elements:
        add(0, vertex_of[e])

    dg = DGraph(Graph(0), a, (0, 1, 2, 3), vertex_of, tuple(vtype), owner, gadget, per_tuple)
    for i, k, p, q in a.pairs():
        ap, bp, cq, dq = dg.gadgets_for(i, k, p, q)
        vp, vq = vertex_of[p], vertex_of[q]
        if i == 1:
            add(cq, vp)
            add(vq, 2)
        elif i == 2:
            add(2, vp)
            add(bp, vq)
        elif i == 3:
            add(2, vp)
            add(2, vq)
            add(ap, cq)
        else:
            add(2, vp)
            add(2, vq)
            add(bp, dq)
    for t in GADGET_TYPES:
        same = [v for v, tt in enumerate(vtype) if tt == t]
        for x in same:
            for y in same:
                if x < y:
                    add(x, y)
    return DGraph(Graph(len(vtype), frozenset(edges)), a, (0, 1, 2, 3), vertex_of, tuple(vtype), owner, gadget, per_tuple)


def extend_hom_to_retraction(a: DInstance, d: DGraph, f: Mapping[Hashable, int]) -> tuple[int, ...]:
    """Retraction of ``d.graph`` built from a homomorphism ``f`` (labels 0, 1, 3) via the pair tables."""
    for e in a.elements:
        if f.get(e) not in (0, 1, 3):
            raise InputError(f"element {e!r} has no image in {{0, 1, 3}}")
    d_rels = [r.tuples for r in D_STRUCTURE.relations]
    to_ix = {lab: i for i, lab in enumerate(D_STRUCTURE.labels)}
    for i, _, p, q in a.pairs():
        if (to_ix[f[p]], to_ix[f[q]]) not in d_rels[i - 1]:
            raise InputError(f"f is not a homomorphism: ({f[p]}, {f[q]}) not in S{i}")

    g = [-1] * d.graph.n
    for i, h in enumerate(d.h):
        g[h] = i
    for e, v in d.vertex_of.items():
        g[v] = f[e]

    def put(v, val):
        if g[v] not in (-1, val):
            raise ClaimViolation(f"vertex {v} assigned both h{g[v]} and h{val}")
        g[v] = val

    for i, k, p, q in a.pairs():
        row = RETRACTION_TABLES[i].get((f[p], f[q]))
        if row is None:
            raise ClaimViolation(f"no table row for R{i} pair images ({f[p]}, {f[q]})")
        for v, val in zip(d.gadgets_for(i, k, p, q), row):
            put(v, val)
    if -1 in g:
        raise ClaimViolation(f"vertices left unassigned: {[v for v, x in enumerate(g) if x < 0]}")
    out = tuple(g)
    if not check_retraction(d.graph, d.h, out):
        raise ClaimViolation("table-derived mapping is not a retraction")
    return out


def restrict_retraction_to_hom(a: DInstance, d: DGraph, g: Sequence[int]) -> dict:
    """Read a homomorphism to D off a retraction: ``f(p) = i`` when ``g(p) = h_i``."""
    if not check_retraction(d.graph, d.h, g):
        raise InputError("g is not a retraction of the D-graph")
    f = {}
    for e in a.elements:
        img = g[d.vertex_of[e]]
        if img == 2:
            raise ClaimViolation(f"element {e!r} retracts to h2")
        f[e] = img
    to_ix = {lab: i for i, lab in enumerate(D_STRUCTURE.labels)}
    d_rels = [r.tuples for r in D_STRUCTURE.relations]
    for i, _, p, q in a.pairs():
        if (to_ix[f[p]], to_ix[f[q]]) not in d_rels[i - 1]:
            raise ClaimViolation(f"restricted map sends R{i} pair ({p}, {q}) outside S{i}")
    return f


@dataclass(frozen=True)
class SemiCompactor:
    graph: Graph
    base: DGraph
    u_of: Mapping[int, int]
    w_of: Mapping[int, int]
    y_of: Mapping[int, int]
    x_vertices: tuple[tuple[int, int, int], ...]  # (x, tail, head)

    @property
    def h(self) -> tuple[int, int, int, int]:
        return self.base.h

    def labels_json(self) -> list[dict]:
        out = self.base.labels_json()
        for kind, table in (("u", self.u_of), ("w", self.w_of), ("y", self.y_of)):
            for v, c in table.items():
                out.append({"id": c, "type": kind, "of": v})
        for x, tail, head in self.x_vertices:
            out.append({"id": x, "type": "x", "tail": tail, "head": head})
        return sorted(out, key=lambda r: r["id"])


def _add_companions(n: int, edges: set, non_h: Sequence[int]):
    """Add u/w/y companions with the compactor wiring; returns the three maps and new vertex count."""
    u_of, w_of, y_of = {}, {}, {}
    for table in (u_of, w_of, y_of):
        for v in non_h:
            table[v] = n
            n += 1

    def add(a, b):
        edges.add((min(a, b), max(a, b)))

    for v in non_h:
        u, w, y = u_of[v], w_of[v], y_of[v]
        for a_, b_ in ((0, u), (0, y), (1, u), (2, w), (2, y), (3, w), (u, v), (u, w), (u, y), (v, w), (w, y)):
            add(a_, b_)
    for table in (u_of, w_of):
        cs = list(table.values())
        for i, a_ in enumerate(cs):
            for b_ in cs[i + 1:]:
                add(a_, b_)
    return u_of, w_of, y_of, n


def _check_cycle_embedding(g: Graph, emb: Sequence[int]) -> None:
    from .problems import _check_embedding

    _check_embedding(g, emb)


def build_compactor(g: Graph, emb: Sequence[int]) -> Graph:
    """Plain H-compactor: companions for every non-H vertex, one x per edge between non-H vertices.

    Each x is oriented from the smaller to the larger id and is not joined to H.
    """
    _check_cycle_embedding(g, emb)
    hs = set(emb)
    # relabel so emb occupies 0..3 and the companion wiring can name h_i directly
    order = list(emb) + [v for v in range(g.n) if v not in hs]
    new = {v: i for i, v in enumerate(order)}
    edges = {(min(new[a], new[b]), max(new[a], new[b])) for a, b in g.edges}
    off_h = sorted(e for e in edges if e[0] >= 4)
    u_of, w_of, _, n = _add_companions(g.n, edges, range(4, g.n))
    for a, b in off_h:
        x = n
        n += 1
        for c in (a, b, u_of[a], w_of[b]):
            edges.add((min(c, x), max(c, x)))
    return Graph(n, frozenset(edges))


def build_semi_compactor(d: DGraph) -> SemiCompactor:
    base = d.graph
    if d.h != (0, 1, 2, 3):
        raise InputError("semi-compactor expects h0..h3 at vertices 0..3")
    edges = set(base.edges)
    non_h = [v for v in range(base.n) if d.vtype[v] != "h"]
    u_of, w_of, y_of, n = _add_companions(base.n, edges, non_h)

    wanted: dict[frozenset, tuple[int, int]] = {}
    for i, k, p, q in d.instance.pairs():
        ap, bp, cq, dq = d.gadgets_for(i, k, p, q)
        vp, vq = d.vertex_of[p], d.vertex_of[q]
        oriented = [(ap, vp), (vp, bp), (ap, bp), (vq, cq), (vq, dq), (dq, cq)]
        oriented.append({1: (vp, cq), 2: (vq, bp), 3: (ap, cq), 4: (dq, bp)}[i])
        for tail, head in oriented:
            wanted.setdefault(frozenset((tail, head)), (tail, head))

    expected = {
        frozenset(e) for e in base.edges
        if d.vtype[e[0]] != "h" and d.vtype[e[1]] != "h"
        and not (d.vtype[e[0]] == d.vtype[e[1]] and d.vtype[e[0]] in GADGET_TYPES)
    }
    if set(wanted) != expected:
        raise ClaimViolation("chosen x-orientations do not cover exactly the non-clique edges off H")

    x_vertices = []
    for tail, head in wanted.values():
        x = n
        n += 1
        for c in (tail, head, u_of[tail], w_of[head], 0, 2):
            edges.add((min(c, x), max(c, x)))
        x_vertices.append((x, tail, head))
    return SemiCompactor(Graph(n, frozenset(edges)), d, u_of, w_of, y_of, tuple(x_vertices))


def reduce_instance(a: DInstance) -> SemiCompactor:
    return build_semi_compactor(build_d_graph(a))


def forced_companions(label: int) -> tuple[int, int, int]:
    """Images of ``(u_v, w_v, y_v)`` forced once ``v`` maps to ``h_label``."""
    if label in (0, 1):
        w = 3 - label
        u = label
    else:
        u = 3 - label
        w = label
    y = 1 if u == 1 else 3
    return u, w, y


def x_candidates(gv: int, gv2: int) -> frozenset:
    """Labels compatible with the four base neighbours ``v, v', u_v, w_v'`` of ``x_vv'``."""
    nbrs = (gv, gv2, forced_companions(gv)[0], forced_companions(gv2)[1])
    return frozenset(l for l in range(4) if all((l - m) % 4 != 2 for m in nbrs))


def extend_retraction_to_semicompactor(sc: SemiCompactor, g: Sequence[int]) -> tuple[int, ...]:
    base = sc.base
    if not check_retraction(base.graph, base.h, g):
        raise InputError("g is not a retraction of the base D-graph")
    out = list(g) + [-1] * (sc.graph.n - base.graph.n)
    for v in sc.u_of:
        out[sc.u_of[v]], out[sc.w_of[v]], out[sc.y_of[v]] = forced_companions(g[v])
    for x, tail, head in sc.x_vertices:
        key = (g[tail], g[head])
        if key in IMPOSSIBLE_ROWS:
            raise ClaimViolation(f"extension row {EXTENSION_ROW_NUMBER[key]} arose at x={x} ({tail}->{head})")
        choice = EXTENSION_TABLE[key][6] & {1, 3}
        if not choice:
            raise ClaimViolation(f"no h1/h3 image for x={x} in row {EXTENSION_ROW_NUMBER[key]}")
        out[x] = 1 if 1 in choice else 3
    result = tuple(out)
    if not check_retraction(sc.graph, sc.h, result) or not check_c4r_hom(sc.graph, result):
        raise ClaimViolation("extended mapping is not a retraction of the semi-compactor")
    return result
