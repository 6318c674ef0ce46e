"""Finite undirected graphs with an explicit loop set, and their basic metrics.

Vertices are the integers ``0..n-1``. Edges are stored as sorted pairs
``(u, v)`` with ``u < v``; self-loops live in a separate ``loops`` set so the
same type serves irreflexive inputs and partially reflexive targets.
Distances and diameters ignore loops.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

from .errors import EmptySubgraphError, InputError, LoopError, ParseError

__all__ = [
    "Graph",
    "ModelGraph",
    "TWO_K2",
    "TWO_S2",
    "components",
    "induced_subgraph",
    "complement",
    "distance",
    "diameter",
    "find_dominating_non_edge",
    "is_dominating_pair",
    "is_connected",
    "parse_graph",
    "format_graph",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "complete_bipartite",
]


def _norm_pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)
    loops: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self pair ({u},{u}) in edge set; use loops instead")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u},{v}) out of range for n={self.n}")
            norm.add(_norm_pair(u, v))
        loops = frozenset(self.loops)
        for v in loops:
            if not 0 <= v < self.n:
                raise InputError(f"loop {v} out of range for n={self.n}")
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "loops", loops)

    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        """Neighbour sets, loops excluded."""
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adj_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in nb) for nb in self.adj)

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return u in self.loops
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)


@dataclass(frozen=True)
class ModelGraph:
    """A pattern with solid (forced) and dotted (forbidden) edges."""

    k: int
    solid: frozenset = field(default_factory=frozenset)
    dotted: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        solid = frozenset(_norm_pair(*p) for p in self.solid)
        dotted = frozenset(_norm_pair(*p) for p in self.dotted)
        if solid & dotted:
            raise InputError(f"pairs both solid and dotted: {sorted(solid & dotted)}")
        for u, v in solid | dotted:
            if u == v or not (0 <= u < self.k and 0 <= v < self.k):
                raise InputError(f"bad model pair ({u},{v}) for k={self.k}")
        object.__setattr__(self, "solid", solid)
        object.__setattr__(self, "dotted", dotted)

    def relation(self, i: int, j: int) -> Optional[str]:
        p = _norm_pair(i, j)
        if p in self.solid:
            return "solid"
        if p in self.dotted:
            return "dotted"
        return None


TWO_K2 = ModelGraph(4, solid=frozenset({(0, 2), (1, 3)}))
TWO_S2 = ModelGraph(4, dotted=frozenset({(0, 2), (1, 3)}))


def _bfs(g: Graph, source: int, allowed: Optional[frozenset] = None) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def components(g: Graph) -> list[frozenset]:
    """Connected components, ordered by their minimum vertex id."""
    seen: set[int] = set()
    out = []
    for v in range(g.n):
        if v not in seen:
            comp = frozenset(_bfs(g, v))
            seen |= comp
            out.append(comp)
    return out


def components_within(g: Graph, u: Iterable[int]) -> list[frozenset]:
    """Components of ``g[u]`` in original vertex ids, without re-indexing."""
    allowed = frozenset(u)
    seen: set[int] = set()
    out = []
    for v in sorted(allowed):
        if v not in seen:
            comp = frozenset(_bfs(g, v, allowed))
            seen |= comp
            out.append(comp)
    return out


def induced_subgraph(g: Graph, u: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Return ``(g[u], id_map)`` where ``id_map[i]`` is the original id of new vertex ``i``."""
    members = sorted(set(u))
    if not members:
        raise EmptySubgraphError("empty induced subgraph requested")
    for v in members:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range for n={g.n}")
    new_id = {v: i for i, v in enumerate(members)}
    edges = {(new_id[a], new_id[b]) for a, b in g.edges if a in new_id and b in new_id}
    loops = {new_id[v] for v in g.loops if v in new_id}
    return Graph(len(members), frozenset(edges), frozenset(loops)), tuple(members)


def complement(g: Graph) -> Graph:
    if g.loops:
        raise LoopError("complement is undefined on partially reflexive input")
    edges = {p for p in combinations(range(g.n), 2) if p not in g.edges}
    return Graph(g.n, frozenset(edges))


def distance(g: Graph, u: int, v: int) -> float:
    """Shortest-path edge count between ``u`` and ``v``; ``math.inf`` if unreachable."""
    return _bfs(g, u).get(v, math.inf)


def diameter(g: Graph) -> float:
    if g.n == 0:
        return 0
    best = 0
    for v in range(g.n):
        dist = _bfs(g, v)
        if len(dist) < g.n:
            return math.inf
        best = max(best, max(dist.values()))
    return best


def is_dominating_pair(g: Graph, u: int, v: int) -> bool:
    """True iff every vertex other than ``u``, ``v`` is adjacent to one of them."""
    covered = g.adj_mask[u] | g.adj_mask[v] | (1 << u) | (1 << v)
    return covered == (1 << g.n) - 1


def find_dominating_non_edge(g: Graph) -> Optional[tuple[int, int]]:
    """Lexicographically least non-adjacent dominating pair, or ``None``."""
    for u, v in combinations(range(g.n), 2):
        if not g.has_edge(u, v) and is_dominating_pair(g, u, v):
            return (u, v)
    return None


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


# -- small constructors used by tests, demos and the CLI ---------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int, reflexive: bool = False) -> Graph:
    edges = frozenset(_norm_pair(i, (i + 1) % n) for i in range(n))
    return Graph(n, edges, frozenset(range(n)) if reflexive else frozenset())


def complete_bipartite(k: int, l: int) -> Graph:
    return Graph(k + l, frozenset((i, k + j) for i in range(k) for j in range(l)))


# -- text format -------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the line format ``n <count>`` / ``e <u> <v>`` / ``loop <v>`` / ``# ...``."""
    n = None
    edges: set[tuple[int, int]] = set()
    loops: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer id in {raw!r}") from None
        if any(x < 0 for x in nums):
            raise ParseError(f"line {lineno}: negative id")
        key = parts[0]
        if key == "n" and len(nums) == 1:
            if n is not None:
                raise ParseError(f"line {lineno}: vertex count given twice")
            n = nums[0]
        elif key == "e" and len(nums) == 2:
            u, v = nums
            if u == v:
                raise ParseError(f"line {lineno}: self pair in 'e' line; use 'loop {u}'")
            p = _norm_pair(u, v)
            if p in edges:
                raise ParseError(f"line {lineno}: duplicate edge {p}")
            edges.add(p)
        elif key == "loop" and len(nums) == 1:
            if nums[0] in loops:
                raise ParseError(f"line {lineno}: duplicate loop {nums[0]}")
            loops.add(nums[0])
        else:
            raise ParseError(f"line {lineno}: unrecognised line {raw!r}")
    if n is None:
        raise ParseError("missing 'n <count>' line")
    bad = [x for p in edges for x in p if x >= n] + [v for v in loops if v >= n]
    if bad:
        raise ParseError(f"vertex id {bad[0]} out of range for n={n}")
    return Graph(n, frozenset(edges), frozenset(loops))


def format_graph(g: Graph, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"n {g.n}")
    lines.extend(f"e {u} {v}" for u, v in g.sorted_edges())
    lines.extend(f"loop {v}" for v in sorted(g.loops))
    return "\n".join(lines) + "\n"
