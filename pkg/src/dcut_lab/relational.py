"""Finite relational structures and homomorphism search between them.

Elements of a structure are the integers ``0..m-1``. A structure may carry
display ``labels`` (the structure D uses labels 0, 1, 3 for internal
elements 0, 1, 2); all functions here speak internal indices, and labels
only matter for I/O.

Power-structure elements use a big-endian index: the tuple
``(x_1, ..., x_l)`` over a domain of size ``m`` has index
``sum(x_k * m**(l - k))``, so the first coordinate is most significant.
"""

from __future__ import annotations

import enum
import itertools
import json
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, InputError, SearchTimeout, SignatureError
from .graph import Graph

__all__ = [
    "Relation",
    "Structure",
    "D_STRUCTURE",
    "PolymorphismKind",
    "SearchStats",
    "is_homomorphism",
    "find_homomorphism",
    "iter_homomorphisms",
    "power",
    "power_index",
    "power_tuple",
    "endomorphisms",
    "is_core",
    "find_restricted_polymorphism",
    "restricted_pins",
    "satisfies_kind",
    "graph_to_structure",
    "structure_from_json",
    "structure_to_json",
]

DEFAULT_POWER_BUDGET = 30_000


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    tuples: frozenset

    def __post_init__(self):
        tuples = frozenset(tuple(t) for t in self.tuples)
        for t in tuples:
            if len(t) != self.arity:
                raise InputError(f"relation {self.name}: tuple {t} has wrong arity")
        object.__setattr__(self, "tuples", tuples)


@dataclass(frozen=True)
class Structure:
    m: int
    relations: tuple[Relation, ...]
    labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        for rel in self.relations:
            for t in rel.tuples:
                if any(not 0 <= x < self.m for x in t):
                    raise InputError(f"relation {rel.name}: tuple {t} outside domain of size {self.m}")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.m or len(set(labels)) != self.m:
                raise InputError("labels must be distinct, one per element")
            object.__setattr__(self, "labels", labels)

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((r.name, r.arity) for r in self.relations)

    def label(self, x: int):
        return self.labels[x] if self.labels is not None else x

    def index(self, label) -> int:
        """Internal element for a display label."""
        if self.labels is None:
            if not 0 <= label < self.m:
                raise InputError(f"no element {label}")
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"no element labelled {label!r}") from None

    def relation(self, name: str) -> Relation:
        for rel in self.relations:
            if rel.name == name:
                return rel
        raise KeyError(name)


def _structure(m, rels, labels=None) -> Structure:
    return Structure(m, tuple(Relation(name, ar, frozenset(ts)) for name, ar, ts in rels), labels)


def _make_d() -> Structure:
    lab = (0, 1, 3)
    ix = {v: i for i, v in enumerate(lab)}
    raw = {
        "S1": [(0, 3), (1, 1), (3, 1), (3, 3)],
        "S2": [(1, 0), (1, 1), (3, 1), (3, 3)],
        "S3": [(1, 3), (3, 1), (3, 3)],
        "S4": [(1, 1), (1, 3), (3, 1)],
    }
    rels = [(name, 2, {(ix[a], ix[b]) for a, b in pairs}) for name, pairs in raw.items()]
    return _structure(3, rels, lab)


#: The three-element structure with four binary relations seeding the reduction.
D_STRUCTURE = _make_d()


class PolymorphismKind(enum.Enum):
    MAJORITY = "majority"
    MALTSEV = "maltsev"
    SEMILATTICE_MEET = "semilattice-meet"
    SEMILATTICE_JOIN = "semilattice-join"

    @property
    def arity(self) -> int:
        return 3 if self in (PolymorphismKind.MAJORITY, PolymorphismKind.MALTSEV) else 2


@dataclass
class SearchStats:
    """Mutable counters threaded through a search; ``deadline`` is a ``time.monotonic`` value."""

    nodes: int = 0
    deadline: Optional[float] = None

    def tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and (self.nodes & 0xFF) == 0 and time.monotonic() > self.deadline:
            raise SearchTimeout(f"deadline passed after {self.nodes} nodes")


def _check_signature(a: Structure, b: Structure) -> None:
    if a.signature != b.signature:
        raise SignatureError(f"signature mismatch: {a.signature} vs {b.signature}")


def is_homomorphism(a: Structure, b: Structure, f: Sequence[int]) -> bool:
    _check_signature(a, b)
    if len(f) != a.m or any(not 0 <= x < b.m for x in f):
        raise InputError("mapping is not a total function into the target domain")
    for ra, rb in zip(a.relations, b.relations):
        for t in ra.tuples:
            if tuple(f[x] for x in t) not in rb.tuples:
                return False
    return True


class _HomSearch:
    """Backtracking over source elements with generalized arc consistency."""

    def __init__(self, a: Structure, b: Structure, pins: Optional[dict[int, Iterable[int]]], stats: SearchStats):
        self.n = a.m
        self.stats = stats
        full = set(range(b.m))
        self.domains: list[set[int]] = [set(full) for _ in range(a.m)]
        for x, allowed in (pins or {}).items():
            self.domains[x] &= set(allowed)
        # One constraint per source tuple: (scope, allowed target tuples).
        self.constraints: list[tuple[tuple[int, ...], frozenset]] = []
        for ra, rb in zip(a.relations, b.relations):
            for t in sorted(ra.tuples):
                self.constraints.append((t, rb.tuples))
        self.watch: list[list[int]] = [[] for _ in range(a.m)]
        for ci, (scope, _) in enumerate(self.constraints):
            for x in set(scope):
                self.watch[x].append(ci)

    def _revise(self, ci: int) -> Optional[set[int]]:
        """Prune unsupported values on one constraint. Returns changed vars, or None on wipe-out."""
        scope, allowed = self.constraints[ci]
        doms = self.domains
        support = [set() for _ in scope]
        for s in allowed:
            ok = True
            seen: dict[int, int] = {}
            for x, val in zip(scope, s):
                if val not in doms[x] or seen.setdefault(x, val) != val:
                    ok = False
                    break
            if ok:
                for k, val in enumerate(s):
                    support[k].add(val)
        changed = set()
        for k, x in enumerate(scope):
            new = doms[x] & support[k]
            if new != doms[x]:
                if not new:
                    return None
                doms[x] = new
                changed.add(x)
        return changed

    def propagate(self, touched: Iterable[int]) -> bool:
        queue = list(dict.fromkeys(ci for x in touched for ci in self.watch[x]))
        queued = set(queue)
        while queue:
            ci = queue.pop()
            queued.discard(ci)
            changed = self._revise(ci)
            if changed is None:
                return False
            for x in changed:
                for cj in self.watch[x]:
                    if cj not in queued:
                        queued.add(cj)
                        queue.append(cj)
        return True

    def solutions(self) -> Iterator[tuple[int, ...]]:
        if any(not d for d in self.domains):
            return
        if not self.propagate(range(self.n)):
            return
        yield from self._branch()

    def _branch(self) -> Iterator[tuple[int, ...]]:
        open_vars = [x for x in range(self.n) if len(self.domains[x]) > 1]
        if not open_vars:
            yield tuple(next(iter(d)) for d in self.domains)
            return
        x = min(open_vars, key=lambda v: (len(self.domains[v]), v))
        for val in sorted(self.domains[x]):
            self.stats.tick()
            saved = [set(d) for d in self.domains]
            self.domains[x] = {val}
            if self.propagate([x]):
                yield from self._branch()
            self.domains = saved


def iter_homomorphisms(a: Structure, b: Structure, pins=None, stats: Optional[SearchStats] = None) -> Iterator[tuple[int, ...]]:
    _check_signature(a, b)
    search = _HomSearch(a, b, pins, stats or SearchStats())
    if b.m == 0:
        if a.m == 0:
            yield ()
        return
    yield from search.solutions()


def find_homomorphism(a: Structure, b: Structure, pins=None, stats: Optional[SearchStats] = None) -> Optional[tuple[int, ...]]:
    """A homomorphism ``a -> b`` as a tuple ``f`` with ``f[x]`` the image of ``x``, or ``None``.

    ``pins`` optionally restricts chosen source elements to given candidate sets.
    """
    return next(iter_homomorphisms(a, b, pins, stats), None)


def power_index(coords: Sequence[int], m: int) -> int:
    idx = 0
    for c in coords:
        idx = idx * m + c
    return idx


def power_tuple(idx: int, m: int, l: int) -> tuple[int, ...]:
    out = []
    for _ in range(l):
        idx, r = divmod(idx, m)
        out.append(r)
    return tuple(reversed(out))


def power(a: Structure, l: int, budget: int = DEFAULT_POWER_BUDGET) -> Structure:
    if l < 1:
        raise InputError("power exponent must be >= 1")
    size = a.m ** l
    if size > budget:
        raise BudgetExceeded(f"power domain {a.m}^{l}={size} exceeds budget {budget}")
    rels = []
    for rel in a.relations:
        tuples = set()
        for rows in itertools.product(sorted(rel.tuples), repeat=l):
            # rows[j] is the j-th coordinate slice; element k collects rows[*][k].
            tuples.add(tuple(power_index([row[k] for row in rows], a.m) for k in range(rel.arity)))
        rels.append(Relation(rel.name, rel.arity, frozenset(tuples)))
    labels = None
    if a.labels is not None:
        labels = tuple(tuple(a.labels[c] for c in power_tuple(i, a.m, l)) for i in range(size))
    return Structure(size, tuple(rels), labels)


def endomorphisms(b: Structure) -> list[tuple[int, ...]]:
    return sorted(iter_homomorphisms(b, b))


def is_core(b: Structure) -> bool:
    endos = set(endomorphisms(b))
    for f in endos:
        if len(set(f)) != b.m:
            return False
        inv = [0] * b.m
        for x, y in enumerate(f):
            inv[y] = x
        if tuple(inv) not in endos:
            return False
    return True


def restricted_pins(m: int, sub: Sequence[int], kind: PolymorphismKind) -> dict[int, int]:
    """Power-domain values forced by ``kind``'s identities on the two-element ``sub``.

    For the semilattice kinds the smaller element of ``sub`` plays Boolean 0.
    """
    lo, hi = sorted(sub)
    pins: dict[tuple, int] = {}
    if kind is PolymorphismKind.SEMILATTICE_MEET:
        pins = {(lo, lo): lo, (lo, hi): lo, (hi, lo): lo, (hi, hi): hi}
    elif kind is PolymorphismKind.SEMILATTICE_JOIN:
        pins = {(lo, lo): lo, (lo, hi): hi, (hi, lo): hi, (hi, hi): hi}
    elif kind is PolymorphismKind.MAJORITY:
        for h, i in itertools.product((lo, hi), repeat=2):
            pins[(h, h, i)] = pins[(h, i, h)] = pins[(i, h, h)] = h
    elif kind is PolymorphismKind.MALTSEV:
        for i, j in itertools.product((lo, hi), repeat=2):
            pins[(i, j, j)] = i
            pins[(j, j, i)] = i
    return {power_index(k, m): v for k, v in pins.items()}


def find_restricted_polymorphism(
    b: Structure,
    sub: Sequence[int],
    kind: PolymorphismKind,
    arity: int,
    stats: Optional[SearchStats] = None,
    budget: int = DEFAULT_POWER_BUDGET,
) -> Optional[tuple[int, ...]]:
    """Search Pol(b) for an ``arity``-ary ``f`` whose restriction to ``sub`` is of ``kind``.

    Only the values the identities force on ``sub``-tuples are pinned; the rest
    are left to the homomorphism search from ``b**arity`` to ``b``. The result
    is indexed by :func:`power_index`.
    """
    if arity != kind.arity:
        raise InputError(f"{kind.value} needs arity {kind.arity}, got {arity}")
    sub = tuple(sub)
    if len(set(sub)) != 2 or any(not 0 <= x < b.m for x in sub):
        raise InputError(f"sub must be two distinct elements of the domain, got {sub}")
    pins = {k: {v} for k, v in restricted_pins(b.m, sub, kind).items()}
    return find_homomorphism(power(b, arity, budget), b, pins, stats)


def satisfies_kind(f: Sequence[int], m: int, sub: Sequence[int], kind: PolymorphismKind) -> bool:
    """Evaluate ``kind``'s defining identities on ``sub`` literally."""
    def ev(*args):
        return f[power_index(args, m)]

    lo, hi = sorted(sub)
    pair = (lo, hi)
    if kind in (PolymorphismKind.SEMILATTICE_MEET, PolymorphismKind.SEMILATTICE_JOIN):
        for i, j in itertools.product(pair, repeat=2):
            if ev(i, i) != i or ev(i, j) != ev(j, i) or ev(i, j) not in pair:
                return False
        for h, i, j in itertools.product(pair, repeat=3):
            if ev(h, ev(i, j)) != ev(ev(h, i), j):
                return False
        absorbing = lo if kind is PolymorphismKind.SEMILATTICE_MEET else hi
        return ev(lo, hi) == absorbing
    if kind is PolymorphismKind.MAJORITY:
        return all(ev(h, h, i) == ev(h, i, h) == ev(i, h, h) == h for h, i in itertools.product(pair, repeat=2))
    return all(ev(i, j, j) == i and ev(j, j, i) == i for i, j in itertools.product(pair, repeat=2))


def graph_to_structure(g: Graph) -> Structure:
    tuples = {(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges} | {(v, v) for v in g.loops}
    return Structure(g.n, (Relation("E", 2, frozenset(tuples)),))


def structure_to_json(s: Structure) -> str:
    obj = {
        "domain": s.m,
        "relations": [
            {"name": r.name, "arity": r.arity, "tuples": [list(t) for t in sorted(r.tuples)]}
            for r in s.relations
        ],
    }
    if s.labels is not None:
        obj["labels"] = list(s.labels)
    return json.dumps(obj, indent=1)


def structure_from_json(text: str) -> Structure:
    obj = json.loads(text)
    try:
        rels = tuple(
            Relation(r["name"], int(r["arity"]), frozenset(tuple(t) for t in r["tuples"]))
            for r in obj["relations"]
        )
        return Structure(int(obj["domain"]), rels, obj.get("labels"))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed structure JSON: {exc}") from None
