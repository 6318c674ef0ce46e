"""Exact solvers for the problems tied together by the disconnected-cut equivalences.

Every ``find_*`` returns a witness (checkable by the matching ``check_*``
function, which shares no code with the search) or ``None`` once the search
space is exhausted. Mappings to the reflexive 4-cycle are tuples of labels
0..3 standing for h0..h3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Optional, Sequence

from .c4search import C4Search, compatible
from .errors import InputError, LoopError
from .graph import (
    TWO_K2,
    TWO_S2,
    Graph,
    ModelGraph,
    complement,
    components_within,
    diameter,
    is_connected,
)
from .relational import SearchStats

__all__ = [
    "CutWitness",
    "PartitionWitness",
    "BicliqueCoverWitness",
    "ContractionWitness",
    "find_disconnected_cut",
    "disconnected_cut_by_subsets",
    "find_model_partition",
    "find_2k2_partition",
    "find_2s2_partition",
    "find_2_biclique_vertex_cover",
    "find_surjective_hom_c4r",
    "find_retraction_c4r",
    "find_compaction_c4r",
    "find_proper_biclique_contraction",
    "check_cut",
    "check_partition",
    "check_biclique_cover",
    "check_contraction",
    "check_c4r_hom",
    "check_surjective",
    "check_retraction",
    "check_compaction",
    "check_prop1",
    "Prop1Report",
    "SUBSET_ORACLE_MAX_N",
    "DEFAULT_CONTRACTION_BOUND",
]

SUBSET_ORACLE_MAX_N = 18
DEFAULT_CONTRACTION_BOUND = 12


@dataclass(frozen=True)
class CutWitness:
    u: frozenset

    def to_json(self) -> dict:
        return {"u": sorted(self.u)}


@dataclass(frozen=True)
class PartitionWitness:
    blocks: tuple[frozenset, ...]

    def to_json(self) -> dict:
        return {"blocks": [sorted(b) for b in self.blocks]}


@dataclass(frozen=True)
class BicliqueCoverWitness:
    x: tuple[frozenset, frozenset]
    y: tuple[frozenset, frozenset]

    def to_json(self) -> dict:
        return {"x": [sorted(s) for s in self.x], "y": [sorted(s) for s in self.y]}


@dataclass(frozen=True)
class ContractionWitness:
    blocks: tuple[frozenset, ...]
    sides: tuple[int, ...]

    def to_json(self) -> dict:
        return {"blocks": [sorted(b) for b in self.blocks], "sides": list(self.sides)}


# -- witness checkers ----------------------------------------------------------

def _is_partition(g: Graph, blocks: Sequence[frozenset]) -> bool:
    seen: set[int] = set()
    for b in blocks:
        if not b or seen & b:
            return False
        seen |= b
    return seen == set(range(g.n))


def _count_components(g: Graph, part) -> int:
    return len(components_within(g, part)) if part else 0


def check_cut(g: Graph, w: CutWitness) -> bool:
    rest = set(range(g.n)) - set(w.u)
    return _count_components(g, w.u) >= 2 and _count_components(g, rest) >= 2


def check_partition(g: Graph, m: ModelGraph, w: PartitionWitness) -> bool:
    if len(w.blocks) != m.k or not _is_partition(g, w.blocks):
        return False
    for i, j in m.solid:
        if any(not g.has_edge(u, v) for u in w.blocks[i] for v in w.blocks[j]):
            return False
    for i, j in m.dotted:
        if any(g.has_edge(u, v) for u in w.blocks[i] for v in w.blocks[j]):
            return False
    return True


def check_biclique_cover(g: Graph, w: BicliqueCoverWitness) -> bool:
    if not _is_partition(g, [*w.x, *w.y]):
        return False
    for s, t in (w.x, w.y):
        if any(not g.has_edge(u, v) for u in s for v in t):
            return False
    return True


def check_contraction(g: Graph, w: ContractionWitness) -> bool:
    if len(w.blocks) != len(w.sides) or not _is_partition(g, w.blocks):
        return False
    if any(s not in (0, 1) for s in w.sides):
        return False
    if w.sides.count(0) < 2 or w.sides.count(1) < 2:
        return False
    for b in w.blocks:
        if len(components_within(g, b)) != 1:
            return False

    def touching(a, b):
        return any(g.has_edge(u, v) for u in a for v in b)

    for i, j in combinations(range(len(w.blocks)), 2):
        linked = touching(w.blocks[i], w.blocks[j])
        if linked != (w.sides[i] != w.sides[j]):
            return False
    return True


def check_c4r_hom(g: Graph, f: Sequence[int]) -> bool:
    if len(f) != g.n or any(x not in (0, 1, 2, 3) for x in f):
        return False
    return all(compatible(f[u], f[v]) for u, v in g.edges)


def check_surjective(g: Graph, f: Sequence[int]) -> bool:
    return check_c4r_hom(g, f) and set(f) == {0, 1, 2, 3}


def check_retraction(g: Graph, emb: Sequence[int], f: Sequence[int]) -> bool:
    return check_c4r_hom(g, f) and all(f[v] == i for i, v in enumerate(emb))


def check_compaction(g: Graph, f: Sequence[int]) -> bool:
    if not check_c4r_hom(g, f):
        return False
    hit = {frozenset((f[u], f[v])) for u, v in g.edges if f[u] != f[v]}
    return hit == {frozenset((i, (i + 1) % 4)) for i in range(4)}


# -- solvers -------------------------------------------------------------------

def _require_loop_free(g: Graph) -> None:
    if g.loops:
        raise LoopError("input must be loop-free")


def find_surjective_hom_c4r(g: Graph, stats: Optional[SearchStats] = None) -> Optional[tuple[int, ...]]:
    """Vertex-surjective homomorphism to the reflexive 4-cycle, or ``None``."""
    return C4Search(g, "surjective", stats=stats).run()


def _check_embedding(g: Graph, emb: Sequence[int]) -> None:
    emb = list(emb)
    if len(emb) != 4 or len(set(emb)) != 4 or any(not 0 <= v < g.n for v in emb):
        raise InputError(f"embedding must be four distinct vertices, got {emb}")
    for i in range(4):
        if not g.has_edge(emb[i], emb[(i + 1) % 4]):
            raise InputError(f"embedding misses cycle edge {emb[i]}-{emb[(i + 1) % 4]}")
    if g.has_edge(emb[0], emb[2]) or g.has_edge(emb[1], emb[3]):
        raise InputError("embedding has a chord; it does not induce the 4-cycle")


def find_retraction_c4r(g: Graph, emb: Sequence[int], stats: Optional[SearchStats] = None) -> Optional[tuple[int, ...]]:
    """Homomorphism fixing ``emb[i] -> h_i``, or ``None``."""
    _check_embedding(g, emb)
    return C4Search(g, "hom", pins={v: i for i, v in enumerate(emb)}, stats=stats).run()


def find_compaction_c4r(g: Graph, stats: Optional[SearchStats] = None) -> Optional[tuple[int, ...]]:
    return C4Search(g, "compaction", stats=stats).run()


def find_disconnected_cut(g: Graph, stats: Optional[SearchStats] = None) -> Optional[CutWitness]:
    """Disconnected cut ``U`` read off a surjective labelling as ``f^-1({h0, h2})``.

    Labels h0 and h2 are non-adjacent in the target, so both ``G[U]`` and
    ``G[V - U]`` split into at least two components. Either side is a cut;
    the one containing vertex 0 is returned.
    """
    _require_loop_free(g)
    if not is_connected(g):
        raise InputError("disconnected cut is defined for connected graphs only")
    f = find_surjective_hom_c4r(g, stats)
    if f is None:
        return None
    parity = f[0] % 2  # report the side holding vertex 0
    return CutWitness(frozenset(v for v in range(g.n) if f[v] % 2 == parity))


def disconnected_cut_by_subsets(g: Graph) -> Optional[CutWitness]:
    """Reference oracle: test every subset ``U`` directly (``n`` at most 18)."""
    if g.n > SUBSET_ORACLE_MAX_N:
        raise InputError(f"subset oracle limited to n <= {SUBSET_ORACLE_MAX_N}")
    everything = set(range(g.n))
    for mask in range(1 << g.n):
        u = frozenset(v for v in range(g.n) if mask >> v & 1)
        if len(u) < 2 or len(u) > g.n - 2:
            continue
        if _count_components(g, u) >= 2 and _count_components(g, everything - u) >= 2:
            return CutWitness(u)
    return None


def find_model_partition(g: Graph, m: ModelGraph, stats: Optional[SearchStats] = None) -> Optional[PartitionWitness]:
    """Backtracking over vertex-to-block labels with forward checking."""
    _require_loop_free(g)
    stats = stats or SearchStats()
    k, n = m.k, g.n
    if n < k:
        return None
    rel = [[m.relation(i, j) if i != j else None for j in range(k)] for i in range(k)]
    dom = [set(range(k)) for _ in range(n)]
    label = [-1] * n
    counts = [0] * k

    def feasible(remaining: int) -> bool:
        empty = [b for b in range(k) if counts[b] == 0]
        if len(empty) > remaining:
            return False
        return all(any(b in dom[v] for v in range(n) if label[v] < 0) for b in empty)

    def assign(v: int, b: int) -> Optional[list]:
        changes = []
        for w in range(n):
            if label[w] >= 0 or w == v:
                continue
            adjacent = g.has_edge(v, w)
            drop = {c for c in dom[w]
                    if (rel[b][c] == "solid" and not adjacent) or (rel[b][c] == "dotted" and adjacent)}
            if drop:
                changes.append((w, drop))
                dom[w] -= drop
                if not dom[w]:
                    for x, d in changes:
                        dom[x] |= d
                    return None
        return changes

    def solve(remaining: int) -> bool:
        if remaining == 0:
            return all(counts)
        v = min((x for x in range(n) if label[x] < 0), key=lambda x: (len(dom[x]), x))
        for b in sorted(dom[v]):
            stats.tick()
            changes = assign(v, b)
            if changes is None:
                continue
            label[v] = b
            counts[b] += 1
            if feasible(remaining - 1) and solve(remaining - 1):
                return True
            label[v] = -1
            counts[b] -= 1
            for x, d in changes:
                dom[x] |= d
        return False

    if not solve(n):
        return None
    return PartitionWitness(tuple(frozenset(v for v in range(n) if label[v] == b) for b in range(k)))


def find_2k2_partition(g: Graph, stats: Optional[SearchStats] = None) -> Optional[PartitionWitness]:
    return find_model_partition(g, TWO_K2, stats)


def find_2s2_partition(g: Graph, stats: Optional[SearchStats] = None) -> Optional[PartitionWitness]:
    return find_model_partition(g, TWO_S2, stats)


def find_2_biclique_vertex_cover(g: Graph, stats: Optional[SearchStats] = None) -> Optional[BicliqueCoverWitness]:
    """Split ``V`` into nonempty ``X1, X2, Y1, Y2`` with ``X1``-``X2`` and ``Y1``-``Y2`` complete.

    Labels 0..3 stand for X1, X2, Y1, Y2; a vertex labelled X1 forces every
    vertex it is not adjacent to out of X2, and so on.
    """
    _require_loop_free(g)
    stats = stats or SearchStats()
    n = g.n
    if n < 4:
        return None
    partner = (1, 0, 3, 2)
    order = sorted(range(n), key=lambda v: (g.degree(v), v))
    label = [-1] * n
    # forbidden[v] is a bitmask of labels excluded by earlier choices
    forbidden = [0] * n
    non_nbrs = [[w for w in range(n) if w != v and not g.has_edge(v, w)] for v in range(n)]

    def solve(i: int, used: int) -> bool:
        if n - i < 4 - bin(used).count("1"):
            return False
        if i == n:
            return used == 0b1111
        v = order[i]
        for lab in range(4):
            if forbidden[v] >> lab & 1:
                continue
            # X1/X2 and Y1/Y2 are interchangeable; open a pair in its first slot only.
            if lab in (1, 3) and not used >> (lab - 1) & 1:
                continue
            if lab == 2 and not used & 0b0011:
                continue
            stats.tick()
            bit = 1 << partner[lab]
            touched = [w for w in non_nbrs[v] if not forbidden[w] & bit]
            if any(label[w] == partner[lab] for w in non_nbrs[v]):
                continue
            for w in touched:
                forbidden[w] |= bit
            label[v] = lab
            if solve(i + 1, used | (1 << lab)):
                return True
            label[v] = -1
            for w in touched:
                forbidden[w] &= ~bit
        return False

    if not solve(0, 0):
        return None
    blocks = [frozenset(v for v in range(n) if label[v] == b) for b in range(4)]
    return BicliqueCoverWitness((blocks[0], blocks[1]), (blocks[2], blocks[3]))


def find_proper_biclique_contraction(
    g: Graph,
    bound: int = DEFAULT_CONTRACTION_BOUND,
    stats: Optional[SearchStats] = None,
) -> Optional[ContractionWitness]:
    """Contraction to some ``K_{k,l}`` with ``k, l >= 2``, or ``None``.

    In any witness the blocks on one side are connected and pairwise
    non-adjacent, so they are exactly the components of that side's union.
    It therefore suffices to enumerate side assignments (vertex 0 on side 0)
    and read blocks off as components.
    """
    _require_loop_free(g)
    if g.n > bound:
        raise InputError(f"contraction search limited to n <= {bound}, got {g.n}")
    if not is_connected(g):
        raise InputError("contraction search expects a connected graph")
    stats = stats or SearchStats()
    n = g.n
    for mask in range(0, 1 << max(n - 1, 0)):
        stats.tick()
        side1 = frozenset(v for v in range(1, n) if mask >> (v - 1) & 1)
        side0 = frozenset(range(n)) - side1
        if len(side0) < 2 or len(side1) < 2:
            continue
        c0 = components_within(g, side0)
        if len(c0) < 2:
            continue
        c1 = components_within(g, side1)
        if len(c1) < 2:
            continue
        adj_masks = g.adj_mask
        ok = True
        for a in c0:
            reach = 0
            for v in a:
                reach |= adj_masks[v]
            if any(not any(reach >> v & 1 for v in b) for b in c1):
                ok = False
                break
        if ok:
            blocks = tuple(c0) + tuple(c1)
            return ContractionWitness(blocks, (0,) * len(c0) + (1,) * len(c1))
    return None


# -- the equivalence check -------------------------------------------------------

@dataclass
class Prop1Report:
    n: int
    diameter: float
    verdicts: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    witness_ok: dict[str, bool] = field(default_factory=dict)
    nodes: dict[str, int] = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    @property
    def failure(self) -> bool:
        return not self.agree or not all(self.witness_ok.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "diameter": None if self.diameter == math.inf else self.diameter,
            "verdicts": self.verdicts,
            "witness_ok": self.witness_ok,
            "nodes": self.nodes,
            "status": "FAILURE" if self.failure else "ok",
        }


def check_prop1(g: Graph, deadline: Optional[float] = None) -> Prop1Report:
    """Run statements (1)-(5), plus (6)-(7) when the diameter is 2, and compare verdicts."""
    _require_loop_free(g)
    if not is_connected(g):
        raise InputError("check_prop1 expects a connected graph")
    gc = complement(g)
    diam = diameter(g)
    report = Prop1Report(g.n, diam)

    def run(key, fn, graph, checker):
        stats = SearchStats(deadline=deadline)
        w = fn(graph, stats=stats)
        report.verdicts[key] = w is not None
        report.nodes[key] = stats.nodes
        if w is not None:
            report.witnesses[key] = w
            report.witness_ok[key] = checker(graph, w)

    run("1_disconnected_cut", find_disconnected_cut, g, check_cut)
    run("2_2s2_partition", find_2s2_partition, g, lambda h, w: check_partition(h, TWO_S2, w))
    run("3_surjective_c4r", find_surjective_hom_c4r, g, check_surjective)
    run("4_biclique_cover_complement", find_2_biclique_vertex_cover, gc, check_biclique_cover)
    run("5_2k2_partition_complement", find_2k2_partition, gc, lambda h, w: check_partition(h, TWO_K2, w))
    if diam == 2:
        run("6_compaction_c4r", find_compaction_c4r, g, check_compaction)
        run("7_biclique_contraction",
            lambda h, stats: find_proper_biclique_contraction(h, bound=max(DEFAULT_CONTRACTION_BOUND, h.n), stats=stats),
            g, check_contraction)
    return report
