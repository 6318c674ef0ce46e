"""Backtracking search for homomorphisms to the reflexive 4-cycle.

Target vertices are the labels 0..3 (h0..h3); two labels are compatible on
an edge iff they are equal or consecutive mod 4. Domains are 4-bit masks.
Forward checking from singleton domains is full arc consistency here: the
union of the closed neighbourhoods of any two distinct labels is all of
{0,1,2,3}, so only a fixed vertex can prune a neighbour.

Three modes share the engine:

``hom``         plain homomorphism, optionally with pinned vertices
``surjective``  every label used
``compaction``  every cycle edge h_i h_{i+1} is the image of some graph edge

In the surjective and compaction modes the search branches on first
occurrences: pick the unmet requirement (a label nobody has yet, or a cycle
edge no graph edge realises yet) with the fewest candidates, and try each
candidate in turn as its first realisation, excluding it once its branch
fails. Once every requirement is met the rest is plain label branching.
The 8 automorphisms of the target are factored out: the first requirement
is met by a single vertex taking label 0, and while the state is invariant
under the reflection swapping 1 and 3 those two labels are treated as one
requirement whose realiser takes 1.
"""

from __future__ import annotations

from typing import Mapping, Optional

from .graph import Graph
from .relational import SearchStats

FULL = 0b1111
# CLOSED[l]: labels compatible with l across an edge.
CLOSED = tuple(((1 << l) | (1 << ((l + 1) % 4)) | (1 << ((l + 3) % 4))) for l in range(4))
_POP = tuple(bin(x).count("1") for x in range(16))
_LOW = tuple((x & -x).bit_length() - 1 for x in range(16))
CYCLE_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))


def compatible(a: int, b: int) -> bool:
    return (a - b) % 4 != 2


class C4Search:
    def __init__(
        self,
        g: Graph,
        mode: str = "hom",
        pins: Optional[Mapping[int, int]] = None,
        stats: Optional[SearchStats] = None,
    ):
        if mode not in ("hom", "surjective", "compaction"):
            raise ValueError(f"unknown mode {mode!r}")
        self.g = g
        self.mode = mode
        self.stats = stats or SearchStats()
        self.adj = [sorted(nb) for nb in g.adj]
        self.deg = [len(nb) for nb in self.adj]
        self.edges = g.sorted_edges()
        self.dom = [FULL] * g.n
        self.pins = dict(pins or {})
        self.symmetric = not self.pins
        self.trail: list[tuple[int, int]] = []
        self.nogoods: list[list[tuple[int, int, int]]] = [[] for _ in range(g.n)]
        # candidate order for first-occurrence branching: hubs first
        self.order = sorted(range(g.n), key=lambda v: (-self.deg[v], v))

    # -- propagation -----------------------------------------------------
    def _restrict(self, v: int, mask: int, queue: list[int]) -> bool:
        old = self.dom[v]
        new = old & mask
        if new == old:
            return True
        if not new:
            return False
        self.trail.append((v, old))
        self.dom[v] = new
        if _POP[new] == 1:
            queue.append(v)
        return True

    def _propagate(self, queue: list[int]) -> bool:
        dom = self.dom
        while queue:
            v = queue.pop()
            lab = _LOW[dom[v]]
            mask = CLOSED[lab]
            for w in self.adj[v]:
                if not self._restrict(w, mask, queue):
                    return False
            for a, w, b in self.nogoods[v]:
                if a == lab and not self._restrict(w, FULL & ~(1 << b), queue):
                    return False
        return self._global_ok()

    def _undo(self, mark: int) -> None:
        trail, dom = self.trail, self.dom
        while len(trail) > mark:
            v, old = trail.pop()
            if v < 0:
                u = old
                _, w, _ = self.nogoods[u].pop()
                self.nogoods[w].pop()
            else:
                dom[v] = old

    def _global_ok(self) -> bool:
        if self.mode == "surjective":
            return self._labels_coverable()
        if self.mode == "compaction":
            return self._edges_coverable()
        return True

    def _labels_coverable(self) -> bool:
        fixed = 0
        open_masks = []
        for d in self.dom:
            if _POP[d] == 1:
                fixed |= d
            else:
                open_masks.append(d)
        missing = FULL & ~fixed
        if not missing:
            return True
        # Hall's condition for matching missing labels to distinct open vertices.
        sub = missing
        while sub:
            need = _POP[sub]
            have = 0
            for d in open_masks:
                if d & sub:
                    have += 1
                    if have >= need:
                        break
            if have < need:
                return False
            sub = (sub - 1) & missing
        return True

    def _edges_coverable(self) -> bool:
        dom = self.dom
        todo = 0b1111  # bit i: cycle edge (i, i+1) still uncovered
        for u, v in self.edges:
            du, dv = dom[u], dom[v]
            for i in range(4):
                if todo >> i & 1:
                    j = (i + 1) % 4
                    if (du >> i & 1 and dv >> j & 1) or (du >> j & 1 and dv >> i & 1):
                        todo &= ~(1 << i)
            if not todo:
                return True
        return False

    # -- search ----------------------------------------------------------
    def _pick(self) -> int:
        best, key = -1, None
        for v, d in enumerate(self.dom):
            p = _POP[d]
            if p > 1:
                k = (p, -self.deg[v], v)
                if key is None or k < key:
                    best, key = v, k
        return best

    def _add_nogood(self, u: int, a: int, v: int, b: int, queue: list[int]) -> bool:
        """Forbid ``u -> a`` together with ``v -> b``; undone through the trail."""
        self.nogoods[u].append((a, v, b))
        self.nogoods[v].append((b, u, a))
        self.trail.append((-1, u))
        du, dv = self.dom[u], self.dom[v]
        if du == 1 << a:
            return self._restrict(v, FULL & ~(1 << b), queue)
        if dv == 1 << b:
            return self._restrict(u, FULL & ~(1 << a), queue)
        return True

    def _requirement(self):
        """Most constrained unmet requirement as ``(kind, target, candidates)``, or ``None``.

        kinds: ``"label"`` (some vertex must take ``target``), ``"odd"`` (some vertex
        must take 1 or 3, used while the state is reflection-symmetric) and
        ``"edge"`` (some edge must realise cycle edge ``target``).
        """
        if self.mode == "hom":
            return None
        fixed = 0
        for d in self.dom:
            if _POP[d] == 1:
                fixed |= d
        missing = FULL & ~fixed
        reqs = []
        if missing:
            labels = [l for l in range(4) if missing >> l & 1]
            if self.symmetric and 1 in labels and 3 in labels:
                labels = [l for l in labels if l not in (1, 3)] + ["odd"]
            for l in labels:
                mask = 0b1010 if l == "odd" else 1 << l
                cands = [v for v in self.order if _POP[self.dom[v]] > 1 and self.dom[v] & mask]
                reqs.append((len(cands), "odd" if l == "odd" else "label", l, cands))
        elif self.mode == "compaction":
            dom = self.dom
            for i, j in CYCLE_EDGES:
                cands = []
                for u, v in self.edges:
                    for s, t in ((u, v), (v, u)):
                        if dom[s] >> i & 1 and dom[t] >> j & 1:
                            if dom[s] == 1 << i and dom[t] == 1 << j:
                                break
                            cands.append((s, t))
                    else:
                        continue
                    break
                else:
                    reqs.append((len(cands), "edge", (i, j), cands))
        if not reqs:
            return None
        _, kind, target, cands = min(reqs, key=lambda r: r[0])
        return kind, target, cands

    def _solve(self, first: bool) -> bool:
        req = self._requirement()
        if req is None:
            return self._branch_labels()
        kind, target, cands = req
        entry = len(self.trail)
        was_symmetric = self.symmetric
        if first:
            # every label is equivalent under rotation: the first candidate takes 0
            cands = cands[:1]
        for c in cands:
            self.stats.tick()
            mark = len(self.trail)
            queue: list[int] = []
            if kind == "edge":
                (s, t), (i, j) = c, target
                ok = self._restrict(s, 1 << i, queue) and self._restrict(t, 1 << j, queue)
            else:
                label = 0 if first else (1 if kind == "odd" else target)
                ok = self._restrict(c, 1 << label, queue)
                if label in (1, 3):
                    self.symmetric = False
            if ok and self._propagate(queue) and self._solve(False):
                return True
            self._undo(mark)
            self.symmetric = was_symmetric
            # c was not the first realisation: exclude it for the remaining branches
            queue = []
            if kind == "edge":
                ok = self._add_nogood(s, i, t, j, queue)
            else:
                ok = self._restrict(c, FULL & ~(0b1010 if kind == "odd" else 1 << target), queue)
            if not (ok and self._propagate(queue)):
                break
        self._undo(entry)
        return False

    def _branch_labels(self) -> bool:
        v = self._pick()
        if v < 0:
            return self._leaf_ok()
        d = self.dom[v]
        choices = [l for l in range(4) if d >> l & 1]
        if self.symmetric and (d & 0b1010) == 0b1010:
            choices.remove(3)
        was_symmetric = self.symmetric
        for l in choices:
            self.stats.tick()
            mark = len(self.trail)
            if was_symmetric and l in (1, 3):
                self.symmetric = False
            self.trail.append((v, d))
            self.dom[v] = 1 << l
            if self._propagate([v]) and self._solve(False):
                return True
            self._undo(mark)
            self.symmetric = was_symmetric
        return False

    def _leaf_ok(self) -> bool:
        labels = [_LOW[d] for d in self.dom]
        if self.mode == "surjective":
            return len(set(labels)) == 4
        if self.mode == "compaction":
            hit = set()
            for u, v in self.edges:
                a, b = labels[u], labels[v]
                if a != b:
                    hit.add(frozenset((a, b)))
            return len(hit) == 4
        return True

    def run(self) -> Optional[tuple[int, ...]]:
        if self.mode == "surjective" and self.g.n < 4:
            return None
        queue: list[int] = []
        for v, l in self.pins.items():
            if not self._restrict(v, 1 << l, queue):
                return None
        if not self._propagate(queue):
            return None
        if self._solve(True):
            return tuple(_LOW[d] for d in self.dom)
        return None
