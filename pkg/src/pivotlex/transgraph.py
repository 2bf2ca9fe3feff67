"""Tripartite word graphs: two non-pivot languages joined through a pivot.

A transgraph holds words of languages A and C on the outside and pivot
words of language B in the middle; an edge marks a shared-meaning
indication taken from the input dictionaries (or proposed later by the
symmetry-completion cycles).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable

from .lexicon import BilingualDictionary, Word

SIDE_AB = "AB"
SIDE_BC = "BC"

# proposed-edge confidence is clamped into (0, 1]
MIN_EDGE_PROB = 1e-6

EdgeKey = tuple[Word, Word, str]  # (non_pivot, pivot, side)


@dataclass(frozen=True)
class Edge:
    """One non-pivot/pivot link. cycle 0 = from the input dictionaries."""

    non_pivot: Word
    pivot: Word
    side: str
    cycle: int = 0
    prob: float = 1.0

    def __post_init__(self):
        if self.side not in (SIDE_AB, SIDE_BC):
            raise ValueError(f"bad edge side: {self.side!r}")
        if not 0.0 < self.prob <= 1.0:
            raise ValueError(f"edge prob out of (0, 1]: {self.prob}")
        if self.cycle == 0 and self.prob != 1.0:
            raise ValueError("dictionary edges must have prob 1")
        if self.cycle < 0:
            raise ValueError("cycle must be >= 0")

    @property
    def key(self) -> EdgeKey:
        return (self.non_pivot, self.pivot, self.side)

    @property
    def is_proposed(self) -> bool:
        return self.cycle > 0


def edge_sort_key(key: EdgeKey):
    non_pivot, pivot, side = key
    return (side, non_pivot, pivot)


@dataclass
class Transgraph:
    """One connected component of the joined dictionaries."""

    id: int
    lang_a: str
    lang_b: str
    lang_c: str
    a_words: frozenset[Word]
    b_words: frozenset[Word]
    c_words: frozenset[Word]
    edges: tuple[Edge, ...]

    @cached_property
    def edge_index(self) -> dict[EdgeKey, Edge]:
        return {e.key: e for e in self.edges}

    @cached_property
    def word_pivots(self) -> dict[Word, tuple[Word, ...]]:
        """Non-pivot word -> its pivot neighbours, sorted."""
        adj: dict[Word, set[Word]] = {}
        for e in self.edges:
            adj.setdefault(e.non_pivot, set()).add(e.pivot)
        return {w: tuple(sorted(ps)) for w, ps in adj.items()}

    @cached_property
    def pivot_a_neighbors(self) -> dict[Word, tuple[Word, ...]]:
        return self._pivot_neighbors(SIDE_AB)

    @cached_property
    def pivot_c_neighbors(self) -> dict[Word, tuple[Word, ...]]:
        return self._pivot_neighbors(SIDE_BC)

    def _pivot_neighbors(self, side: str) -> dict[Word, tuple[Word, ...]]:
        adj: dict[Word, set[Word]] = {}
        for e in self.edges:
            if e.side == side:
                adj.setdefault(e.pivot, set()).add(e.non_pivot)
        return {b: tuple(sorted(ws)) for b, ws in adj.items()}


@dataclass
class TransgraphSet:
    """All components of one dictionary pair, plus the ones set aside."""

    lang_a: str
    lang_b: str
    lang_c: str
    graphs: list[Transgraph]
    skipped: list[tuple[int, int]] = field(default_factory=list)  # (id, edge count)


@dataclass(frozen=True)
class ComponentStats:
    a_count: int
    b_count: int
    c_count: int
    edge_count: int


class UnionFind:
    """Forest over hashable keys with path compression."""

    def __init__(self):
        self.parent: dict = {}

    def find(self, k):
        if k not in self.parent:
            self.parent[k] = k
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
        return ra


def build_transgraphs(
    dict_ab: BilingualDictionary, dict_cb: BilingualDictionary
) -> TransgraphSet:
    """Join the two dictionaries and split into connected components.

    Both dictionaries must be oriented non-pivot -> pivot and share the
    pivot language on the target side. Component ids are assigned by the
    smallest word contained, so they do not depend on input order.
    """
    if dict_ab.target != dict_cb.target:
        raise ValueError(
            f"pivot language mismatch: {dict_ab.target!r} vs {dict_cb.target!r}"
        )
    if dict_ab.source == dict_cb.source:
        raise ValueError("the two non-pivot languages must differ")
    lang_a, lang_b, lang_c = dict_ab.source, dict_ab.target, dict_cb.source

    edges = [Edge(a, b, SIDE_AB) for a, b in sorted(dict_ab.entries)]
    edges += [Edge(c, b, SIDE_BC) for c, b in sorted(dict_cb.entries)]

    uf = UnionFind()
    for e in edges:
        uf.union(e.non_pivot, e.pivot)

    by_root: dict[Word, list[Edge]] = {}
    for e in edges:
        by_root.setdefault(uf.find(e.non_pivot), []).append(e)

    components = sorted(
        by_root.values(), key=lambda es: min(min(e.non_pivot, e.pivot) for e in es)
    )
    graphs = []
    for cid, comp_edges in enumerate(components):
        words = {e.non_pivot for e in comp_edges} | {e.pivot for e in comp_edges}
        graphs.append(
            Transgraph(
                id=cid,
                lang_a=lang_a,
                lang_b=lang_b,
                lang_c=lang_c,
                a_words=frozenset(w for w in words if w.lang == lang_a),
                b_words=frozenset(w for w in words if w.lang == lang_b),
                c_words=frozenset(w for w in words if w.lang == lang_c),
                edges=tuple(sorted(comp_edges, key=lambda e: edge_sort_key(e.key))),
            )
        )
    return TransgraphSet(lang_a, lang_b, lang_c, graphs)


def filter_big(tset: TransgraphSet, max_edges: int) -> TransgraphSet:
    """Move components with more than max_edges edges to the skipped list."""
    if max_edges <= 0:
        raise ValueError("max_edges must be positive")
    kept, skipped = [], list(tset.skipped)
    for g in tset.graphs:
        if len(g.edges) > max_edges:
            skipped.append((g.id, len(g.edges)))
        else:
            kept.append(g)
    return TransgraphSet(tset.lang_a, tset.lang_b, tset.lang_c, kept, sorted(skipped))


def add_new_edges(tg: Transgraph, candidates: Iterable, cycle: int) -> Transgraph:
    """Materialize the missing edges demanded by the candidates' symmetry.

    Each added edge carries the proposing candidate's coexistence value as
    its confidence (the best one when several candidates want the same
    edge); re-applying with the same candidates is a no-op.
    """
    if cycle < 1:
        raise ValueError("cycle must be >= 1")
    proposals: dict[EdgeKey, float] = {}
    for cand in candidates:
        for key in cand.missing_edges:
            if key in tg.edge_index:
                continue
            conf = cand.coexistence
            if key not in proposals or conf > proposals[key]:
                proposals[key] = conf
    if not proposals:
        return tg
    added = [
        Edge(np_, pv, side, cycle=cycle, prob=min(max(conf, MIN_EDGE_PROB), 1.0))
        for (np_, pv, side), conf in proposals.items()
    ]
    all_edges = tuple(
        sorted(list(tg.edges) + added, key=lambda e: edge_sort_key(e.key))
    )
    return Transgraph(
        id=tg.id,
        lang_a=tg.lang_a,
        lang_b=tg.lang_b,
        lang_c=tg.lang_c,
        a_words=tg.a_words,
        b_words=tg.b_words,
        c_words=tg.c_words,
        edges=all_edges,
    )


def component_stats(tg: Transgraph) -> ComponentStats:
    if not tg.edges:
        raise ValueError("empty transgraph")
    return ComponentStats(
        a_count=len(tg.a_words),
        b_count=len(tg.b_words),
        c_count=len(tg.c_words),
        edge_count=len(tg.edges),
    )


def dump_transgraph(tg: Transgraph, sink: IO[str]) -> None:
    """Debug adjacency listing: side, non_pivot, pivot, status, prob."""
    for e in tg.edges:
        status = "existing" if not e.is_proposed else f"proposed:{e.cycle}"
        sink.write(
            f"{e.side}\t{e.non_pivot.surface}\t{e.pivot.surface}\t{status}\t{e.prob:.6f}\n"
        )
