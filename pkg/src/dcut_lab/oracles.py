"""Naive full-enumeration deciders used to cross-check the solvers.

These deliberately share nothing with the search code: labelings are
enumerated as a ``(4**n, n)`` integer array and constraints are evaluated
column-wise with numpy. Practical up to roughly ``n = 9``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, ModelGraph

ORACLE_MAX_N = 9


def all_labelings(n: int, k: int = 4) -> np.ndarray:
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle enumeration limited to n <= {ORACLE_MAX_N}")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    grids = np.indices((k,) * n, dtype=np.int8)
    return grids.reshape(n, -1).T


def _hom_mask(g: Graph, lab: np.ndarray) -> np.ndarray:
    ok = np.ones(len(lab), dtype=bool)
    for u, v in g.edges:
        ok &= (lab[:, u] - lab[:, v]) % 4 != 2
    return ok


def surjective_exists(g: Graph) -> bool:
    lab = all_labelings(g.n)
    ok = _hom_mask(g, lab)
    for c in range(4):
        ok &= (lab == c).any(axis=1)
    return bool(ok.any())


def compaction_exists(g: Graph) -> bool:
    lab = all_labelings(g.n)
    ok = _hom_mask(g, lab)
    for i in range(4):
        j = (i + 1) % 4
        hit = np.zeros(len(lab), dtype=bool)
        for u, v in g.edges:
            a, b = lab[:, u], lab[:, v]
            hit |= ((a == i) & (b == j)) | ((a == j) & (b == i))
        ok &= hit
    return bool(ok.any())


def retraction_exists(g: Graph, emb: Sequence[int]) -> bool:
    lab = all_labelings(g.n)
    ok = _hom_mask(g, lab)
    for i, v in enumerate(emb):
        ok &= lab[:, v] == i
    return bool(ok.any())


def model_partition_exists(g: Graph, m: ModelGraph) -> bool:
    lab = all_labelings(g.n, m.k)
    ok = np.ones(len(lab), dtype=bool)
    for b in range(m.k):
        ok &= (lab == b).any(axis=1)
    for u, v in combinations(range(g.n), 2):
        adjacent = g.has_edge(u, v)
        for i, j in m.solid | m.dotted:
            if (m.relation(i, j) == "solid") == adjacent:
                continue
            ok &= ~(((lab[:, u] == i) & (lab[:, v] == j)) | ((lab[:, u] == j) & (lab[:, v] == i)))
    return bool(ok.any())


def biclique_cover_exists(g: Graph) -> bool:
    """Labels 0,1 form one biclique's sides, 2,3 the other's; all four nonempty."""
    lab = all_labelings(g.n)
    ok = np.ones(len(lab), dtype=bool)
    for b in range(4):
        ok &= (lab == b).any(axis=1)
    for u, v in combinations(range(g.n), 2):
        if g.has_edge(u, v):
            continue
        a, b = lab[:, u], lab[:, v]
        for s, t in ((0, 1), (2, 3)):
            ok &= ~(((a == s) & (b == t)) | ((a == t) & (b == s)))
    return bool(ok.any())


def disconnected_cut_exists(g: Graph) -> bool:
    full = (1 << g.n) - 1
    for mask in range(1, full):
        if _n_components(g, mask) >= 2 and _n_components(g, full ^ mask) >= 2:
            return True
    return False


def _n_components(g: Graph, mask: int) -> int:
    count = 0
    left = mask
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = g.adj_mask[v] & mask & ~comp
            comp |= new
            frontier |= new
        left &= ~comp
        count += 1
    return count


def set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted-growth strings of length ``n``."""
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield list(rgs)
            return
        for b in range(top + 2):
            rgs[i] = b
            yield from rec(i + 1, max(top, b))

    rgs[0] = 0
    yield from rec(1, 0)


def biclique_contraction_exists(g: Graph) -> bool:
    """Try every partition into connected blocks whose quotient is ``K_{k,l}``, ``k, l >= 2``."""
    for rgs in set_partitions(g.n):
        nb = max(rgs) + 1
        if nb < 4:
            continue
        masks = [0] * nb
        for v, b in enumerate(rgs):
            masks[b] |= 1 << v
        if any(_n_components(g, m) != 1 for m in masks):
            continue
        quotient = [[False] * nb for _ in range(nb)]
        for u, v in g.edges:
            a, b = rgs[u], rgs[v]
            if a != b:
                quotient[a][b] = quotient[b][a] = True
        side = [0 if not quotient[0][b] else 1 for b in range(nb)]
        good = all(quotient[a][b] == (side[a] != side[b]) for a in range(nb) for b in range(a + 1, nb))
        if good and side.count(0) >= 2 and side.count(1) >= 2:
            return True
    return False
