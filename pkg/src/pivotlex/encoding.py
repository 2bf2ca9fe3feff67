"""Weighted CNF encodings of the extraction constraints.

Propositions are edges (the word link exists), cognate decisions and
synonym decisions. Hard clauses pin down the known graph and the rules of
the game; soft clauses price the hypothesized edges, so the solver's
optimum is the cheapest consistent reading of the transgraph.

Soft weights are kept both as floats and as integer micro-units
(rounded to 1e-6); every cost comparison and the WCNF export use the
integer form, so runs are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import IO, Iterable, Sequence

from .heuristics import PairCandidate, SynonymCandidate
from .lexicon import Word
from .transgraph import EdgeKey, Transgraph, edge_sort_key

MICRO = 10**6

KIND_COGNATE = "cognate"
KIND_SYNONYM = "synonym"
KIND_EDGE = "edge"
KIND_RAW = "var"


@dataclass(frozen=True)
class Clause:
    """Disjunction of signed variable ids; weight None means hard."""

    literals: tuple[int, ...]
    weight: float | None = None
    micro: int = 0

    def __post_init__(self):
        if not self.literals:
            raise ValueError("empty clause")
        seen = set(self.literals)
        if len(seen) != len(self.literals):
            raise ValueError(f"duplicate literal in clause {self.literals}")
        if any(-l in seen for l in self.literals):
            raise ValueError(f"complementary literals in clause {self.literals}")

    @property
    def is_hard(self) -> bool:
        return self.weight is None


def hard_clause(literals: Iterable[int]) -> Clause:
    return Clause(tuple(literals))


def soft_clause(literals: Iterable[int], weight: float) -> Clause:
    """Soft clause; weight is floored at one micro-unit to stay positive."""
    if weight < 0:
        raise ValueError("soft weight must be non-negative")
    micro = max(1, round(weight * MICRO))
    return Clause(tuple(literals), weight=micro / MICRO, micro=micro)


class VarRegistry:
    """Bijection between proposition descriptors and dense positive ids."""

    def __init__(self):
        self._ids: dict[tuple, int] = {}
        self._descs: list[tuple | None] = [None]

    def intern(self, desc: tuple) -> int:
        vid = self._ids.get(desc)
        if vid is None:
            vid = len(self._descs)
            self._ids[desc] = vid
            self._descs.append(desc)
        return vid

    def id_of(self, desc: tuple) -> int:
        return self._ids[desc]

    def desc_of(self, vid: int) -> tuple:
        return self._descs[vid]

    def __contains__(self, desc: tuple) -> bool:
        return desc in self._ids

    def __len__(self) -> int:
        return len(self._descs) - 1


def edge_desc(key: EdgeKey) -> tuple:
    non_pivot, pivot, side = key
    return (KIND_EDGE, side, non_pivot, pivot)


def cognate_desc(pair: tuple[Word, Word]) -> tuple:
    return (KIND_COGNATE, pair[0], pair[1])


def synonym_desc(pair: tuple[Word, Word]) -> tuple:
    return (KIND_SYNONYM, pair[0], pair[1])


@dataclass
class CnfFormula:
    registry: VarRegistry
    hard: list[Clause] = field(default_factory=list)
    soft: list[Clause] = field(default_factory=list)
    # index into `hard` of the pick-at-least-one clause, None once exhausted
    pool_index: int | None = None
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        return len(self.registry)

    @property
    def nclauses(self) -> int:
        return len(self.hard) + len(self.soft)


@dataclass
class PipelineSets:
    """Mutable bookkeeping shared by the extraction stages."""

    existing_edges: set[EdgeKey]
    new_edges: set[EdgeKey]
    candidates: list[PairCandidate]
    accepted_cognates: list[PairCandidate] = field(default_factory=list)
    rejected_candidates: list[PairCandidate] = field(default_factory=list)
    anchor_pivots: dict[tuple[Word, Word], tuple[Word, ...]] = field(
        default_factory=dict
    )
    results: set[tuple[Word, Word]] = field(default_factory=set)


def _edge_weights(cands: Sequence) -> dict[EdgeKey, float]:
    """Per-edge soft weight: the cheapest cost among the candidates wanting it."""
    weights: dict[EdgeKey, float] = {}
    for cand in cands:
        w = _per_edge_cost(cand)
        for key in cand.missing_edges:
            if key not in weights or w < weights[key]:
                weights[key] = w
    return weights


def _per_edge_cost(cand) -> float:
    if isinstance(cand, SynonymCandidate):
        if not cand.missing_edges:
            return 0.0
        return (1.0 - cand.shared_prob) / len(cand.missing_edges)
    return cand.edge_cost


def _register_edges(reg: VarRegistry, keys: Iterable[EdgeKey]) -> None:
    for key in sorted(keys, key=edge_sort_key):
        reg.intern(edge_desc(key))


def encode_cognate_cnf(
    tg: Transgraph,
    candidates: Sequence[PairCandidate],
    sets: PipelineSets,
    uniqueness: bool = True,
) -> CnfFormula:
    """Build the cognate-extraction formula over the current sets.

    Clause groups: existing edges pinned true; hypothesized edges soft-false
    at their owners' cost; each decision implies all of its pair's edges;
    optionally at most one decision per word; already accepted decisions
    pinned true; and one disjunction demanding a fresh decision.
    """
    if not candidates:
        raise ValueError("cannot encode without candidates")
    reg = VarRegistry()
    for cand in sorted(candidates, key=lambda c: c.pair):
        reg.intern(cognate_desc(cand.pair))
    _register_edges(reg, set(sets.existing_edges) | set(sets.new_edges))

    cnf = CnfFormula(reg)
    counts = cnf.counts

    for key in sorted(sets.existing_edges, key=edge_sort_key):
        cnf.hard.append(hard_clause((reg.id_of(edge_desc(key)),)))
    counts["edge_exists"] = len(cnf.hard)

    weights = _edge_weights(candidates)
    for key in sorted(sets.new_edges, key=edge_sort_key):
        cnf.soft.append(soft_clause((-reg.id_of(edge_desc(key)),), weights[key]))
    counts["edge_absent"] = len(cnf.soft)

    n_sym = 0
    for cand in sorted(candidates, key=lambda c: c.pair):
        cvar = reg.id_of(cognate_desc(cand.pair))
        for path in sorted(cand.paths, key=lambda p: p.pivot):
            ab = reg.id_of(edge_desc((cand.word_a, path.pivot, "AB")))
            bc = reg.id_of(edge_desc((cand.word_c, path.pivot, "BC")))
            cnf.hard.append(hard_clause((-cvar, ab)))
            cnf.hard.append(hard_clause((-cvar, bc)))
            n_sym += 2
    counts["symmetry"] = n_sym

    n_uniq = 0
    if uniqueness:
        by_a: dict[Word, list[int]] = {}
        by_c: dict[Word, list[int]] = {}
        for cand in sorted(candidates, key=lambda c: c.pair):
            cvar = reg.id_of(cognate_desc(cand.pair))
            by_a.setdefault(cand.word_a, []).append(cvar)
            by_c.setdefault(cand.word_c, []).append(cvar)
        for groups in (by_a, by_c):
            for w in sorted(groups):
                for v1, v2 in combinations(groups[w], 2):
                    cnf.hard.append(hard_clause((-v1, -v2)))
                    n_uniq += 1
    counts["uniqueness"] = n_uniq

    n_committed = 0
    for cand in sets.accepted_cognates:
        cnf.hard.append(hard_clause((reg.id_of(cognate_desc(cand.pair)),)))
        n_committed += 1
    counts["committed"] = n_committed

    pool = [
        reg.id_of(cognate_desc(cand.pair))
        for cand in sorted(candidates, key=lambda c: c.pair)
        if cand.pair not in sets.results
    ]
    if not pool:
        raise ValueError("no undecided candidates left to encode")
    cnf.pool_index = len(cnf.hard)
    cnf.hard.append(hard_clause(tuple(pool)))
    counts["pick_one"] = 1
    return cnf


def encode_many_to_many_cnf(
    tg: Transgraph, candidates: Sequence[PairCandidate], sets: PipelineSets
) -> CnfFormula:
    """Same as the cognate formula but without the uniqueness clauses."""
    return encode_cognate_cnf(tg, candidates, sets, uniqueness=False)


def encode_synonym_cnf(
    tg: Transgraph,
    sets: PipelineSets,
    syn_candidates: Sequence[SynonymCandidate],
) -> CnfFormula | None:
    """Build the synonym-extraction formula; None when the stage is empty.

    A synonym decision implies its anchor cognate plus a link from the
    synonym word to every anchor pivot; absent links are soft with the
    leftover synonym improbability spread evenly across them.
    """
    if not syn_candidates:
        return None
    reg = VarRegistry()
    for cand in sorted(sets.candidates, key=lambda c: c.pair):
        reg.intern(cognate_desc(cand.pair))
    for cand in sorted(syn_candidates, key=lambda c: c.pair):
        reg.intern(synonym_desc(cand.pair))
    # the first stage's leftover hypotheses are dead here; this stage's new
    # edges are the links the synonym words still lack
    new_edges = {
        key
        for cand in syn_candidates
        for key in cand.missing_edges
        if key not in sets.existing_edges
    }
    sets.new_edges = new_edges
    _register_edges(reg, set(sets.existing_edges) | new_edges)

    cnf = CnfFormula(reg)
    counts = cnf.counts

    for key in sorted(sets.existing_edges, key=edge_sort_key):
        cnf.hard.append(hard_clause((reg.id_of(edge_desc(key)),)))
    counts["edge_exists"] = len(cnf.hard)

    weights = _edge_weights(syn_candidates)
    for key in sorted(new_edges, key=edge_sort_key):
        cnf.soft.append(soft_clause((-reg.id_of(edge_desc(key)),), weights[key]))
    counts["edge_absent"] = len(cnf.soft)

    for cand in sets.accepted_cognates:
        cnf.hard.append(hard_clause((reg.id_of(cognate_desc(cand.pair)),)))
    counts["committed"] = len(sets.accepted_cognates)

    for cand in sorted(sets.rejected_candidates, key=lambda c: c.pair):
        cnf.hard.append(hard_clause((-reg.id_of(cognate_desc(cand.pair)),)))
    counts["non_cognate"] = len(sets.rejected_candidates)

    n_link = 0
    for cand in sorted(syn_candidates, key=lambda c: c.pair):
        svar = reg.id_of(synonym_desc(cand.pair))
        cnf.hard.append(hard_clause((-svar, reg.id_of(cognate_desc(cand.anchor)))))
        n_link += 1
        syn_word = cand.word_c if cand.word_a == cand.anchor[0] else cand.word_a
        side = "BC" if syn_word.lang == tg.lang_c else "AB"
        for pivot in cand.anchor_pivots:
            evar = reg.id_of(edge_desc((syn_word, pivot, side)))
            cnf.hard.append(hard_clause((-svar, evar)))
            n_link += 1
    counts["synonym_link"] = n_link

    pool = [
        reg.id_of(synonym_desc(cand.pair))
        for cand in sorted(syn_candidates, key=lambda c: c.pair)
        if cand.pair not in sets.results
    ]
    if not pool:
        return None
    cnf.pool_index = len(cnf.hard)
    cnf.hard.append(hard_clause(tuple(pool)))
    counts["pick_one"] = 1
    return cnf


def update_after_acceptance(
    cnf: CnfFormula, sets: PipelineSets, accepted: PairCandidate | SynonymCandidate
) -> None:
    """Commit one accepted decision into the formula and the set state.

    The decision leaves the pick-one pool, becomes a hard unit, and its
    hypothesized edges turn from soft-false into hard-true.
    """
    pair = accepted.pair
    if pair in sets.results:
        raise ValueError(f"pair {pair} already accepted")
    is_cognate = isinstance(accepted, PairCandidate)
    desc = cognate_desc(pair) if is_cognate else synonym_desc(pair)
    var = cnf.registry.id_of(desc)

    if cnf.pool_index is None:
        raise ValueError("no open pick-one clause")
    pool = cnf.hard[cnf.pool_index]
    remaining = tuple(l for l in pool.literals if l != var)
    if remaining:
        cnf.hard[cnf.pool_index] = hard_clause(remaining)
    else:
        del cnf.hard[cnf.pool_index]
        cnf.pool_index = None
    cnf.hard.append(hard_clause((var,)))

    for key in sorted(accepted.missing_edges, key=edge_sort_key):
        if key not in sets.new_edges:
            continue  # already hardened through a previous acceptance
        sets.new_edges.discard(key)
        sets.existing_edges.add(key)
        evar = cnf.registry.id_of(edge_desc(key))
        cnf.soft = [c for c in cnf.soft if c.literals != (-evar,)]
        cnf.hard.append(hard_clause((evar,)))

    sets.results.add(pair)
    if is_cognate:
        sets.accepted_cognates.append(accepted)


def export_wcnf(cnf: CnfFormula, sink: IO[str]) -> None:
    """Write the standard weighted-CNF text form.

    Header ``p wcnf <nvars> <nclauses> <top>`` with top one above the sum
    of all soft weights (already scaled to integers); hard clauses carry
    weight top, every clause ends with 0.
    """
    if not cnf.hard and not cnf.soft:
        raise ValueError("refusing to export an empty formula")
    top = 1 + sum(c.micro for c in cnf.soft)
    sink.write(f"p wcnf {cnf.nvars} {cnf.nclauses} {top}\n")
    for clause in cnf.hard:
        lits = " ".join(str(l) for l in clause.literals)
        sink.write(f"{top} {lits} 0\n")
    for clause in cnf.soft:
        lits = " ".join(str(l) for l in clause.literals)
        sink.write(f"{clause.micro} {lits} 0\n")


def parse_wcnf(text: str) -> CnfFormula:
    """Read back a formula written by export_wcnf.

    Weights are interpreted as micro-units, inverting the export scaling,
    so optimal costs round-trip exactly.
    """
    reg = VarRegistry()
    cnf = CnfFormula(reg)
    top = None
    nvars = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 5 or parts[1] != "wcnf":
                raise ValueError(f"line {lineno}: bad header")
            nvars, top = int(parts[2]), int(parts[4])
            continue
        if top is None:
            raise ValueError(f"line {lineno}: clause before header")
        parts = [int(p) for p in line.split()]
        if parts[-1] != 0:
            raise ValueError(f"line {lineno}: clause must end with 0")
        weight, lits = parts[0], tuple(parts[1:-1])
        if weight == top:
            cnf.hard.append(hard_clause(lits))
        else:
            cnf.soft.append(Clause(lits, weight=weight / MICRO, micro=weight))
    for vid in range(1, nvars + 1):
        reg.intern((KIND_RAW, vid))
    return cnf
