"""End-to-end extraction: symmetry cycles, cognate stage, synonym stage.

A run is configured by a method descriptor ``<cycle>:<method>:<heuristic>``:

  cycle      1-9, how often the symmetry assumption is re-applied, each
             round treating the previous round's proposed edges as given
  method     C = one-to-one cognates only, S = cognates plus their
             synonyms, M = many-to-many (no uniqueness constraint)
  heuristic  H followed by ascending digits out of 1-4 selecting
             coexistence / missing-contribution / pivot-ambiguity /
             form-similarity (method M supports H1 only)

Each stage repeatedly asks the solver for the cheapest fresh decision and
accepts it while its incremental cost stays below the stage threshold
(no threshold = accept everything reachable).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .encoding import (
    CnfFormula,
    PipelineSets,
    cognate_desc,
    encode_cognate_cnf,
    encode_synonym_cnf,
    synonym_desc,
    update_after_acceptance,
)
from .heuristics import (
    HeuristicSelection,
    PairCandidate,
    SynonymCandidate,
    compute_cognate_probabilities,
    compute_edge_cost,
    compute_tables,
    generate_candidates,
)
from .lexicon import BilingualDictionary, PairSet, Word
from .solver import solve
from .transgraph import (
    SIDE_AB,
    SIDE_BC,
    Transgraph,
    TransgraphSet,
    add_new_edges,
    build_transgraphs,
    edge_sort_key,
    filter_big,
)

COGNATE = "cognate"
SYNONYM = "synonym"

DEFAULT_MAX_EDGES = 2000
MAX_CYCLE = 9


@dataclass(frozen=True)
class MethodDescriptor:
    cycle: int
    method: str
    heuristics: HeuristicSelection

    def __str__(self) -> str:
        return f"{self.cycle}:{self.method}:{self.heuristics.token}"


def parse_method(text: str) -> MethodDescriptor:
    """Parse a descriptor like ``2:S:H14``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad method descriptor {text!r}: want cycle:method:heuristic")
    cycle_s, method, heur = parts
    if len(cycle_s) != 1 or cycle_s not in "123456789":
        raise ValueError(f"bad cycle {cycle_s!r}: want a single digit 1-9")
    if method not in ("C", "S", "M"):
        raise ValueError(f"bad method letter {method!r}: want C, S or M")
    sel = HeuristicSelection.from_token(heur)
    if method == "M" and sel.token != "H1":
        raise ValueError("method M supports only heuristic H1")
    return MethodDescriptor(int(cycle_s), method, sel)


@dataclass(frozen=True)
class HyperParams:
    """Stage thresholds; None disables the filter entirely."""

    cognate_threshold: float | None = None
    synonym_threshold: float | None = None

    def __post_init__(self):
        if self.cognate_threshold is not None and self.cognate_threshold < 0:
            raise ValueError("cognate threshold must be >= 0")
        if self.synonym_threshold is not None and not 0 <= self.synonym_threshold <= 1:
            raise ValueError("synonym threshold must lie in [0, 1]")


@dataclass(frozen=True)
class InducedPair:
    word_a: Word
    word_c: Word
    stage: str
    cost: float
    transgraph_id: int
    anchor: tuple[Word, Word] | None = None

    @property
    def pair(self) -> tuple[Word, Word]:
        return (self.word_a, self.word_c)


@dataclass
class CycleResult:
    graph: Transgraph
    candidates: list[PairCandidate]
    cycles_run: int
    fixpoint: bool


@dataclass
class StageOutcome:
    accepted: list[InducedPair]
    sets: PipelineSets
    hard_unsat: bool


@dataclass(frozen=True)
class TransgraphReport:
    transgraph_id: int
    cycles_run: int
    fixpoint: bool
    candidates: int
    cognate_pairs: int
    synonym_pairs: int
    cognate_unsat: bool
    synonym_unsat: bool


@dataclass
class InductionResult:
    lang_a: str
    lang_c: str
    pairs: list[InducedPair]
    reports: dict[int, TransgraphReport] = field(default_factory=dict)
    skipped: list[tuple[int, int]] = field(default_factory=list)


def _scored_candidates(
    graph: Transgraph, sel: HeuristicSelection
) -> list[PairCandidate]:
    tables = compute_tables(graph)
    cands = generate_candidates(graph)
    for cand in cands:
        compute_cognate_probabilities(cand, tables)
        compute_edge_cost(cand, sel)
    return cands


def run_cycles(tg: Transgraph, descriptor: MethodDescriptor) -> CycleResult:
    """Alternate candidate scoring and edge materialization.

    Runs descriptor.cycle scoring rounds, materializing the missing edges
    between rounds, and stops early once a round would add nothing. The
    returned candidates are scored against the final graph.
    """
    graph = tg
    candidates = _scored_candidates(graph, descriptor.heuristics)
    cycles = 1
    fixpoint = not any(c.missing_edges for c in candidates)
    for cyc in range(2, descriptor.cycle + 1):
        grown = add_new_edges(graph, candidates, cycle=cyc - 1)
        if grown is graph:
            fixpoint = True
            break
        graph = grown
        candidates = _scored_candidates(graph, descriptor.heuristics)
        cycles = cyc
        fixpoint = not any(c.missing_edges for c in candidates)
    return CycleResult(graph, candidates, cycles, fixpoint)


def _run_stage(
    cnf: CnfFormula,
    sets: PipelineSets,
    pool: dict[int, PairCandidate | SynonymCandidate],
    threshold: float | None,
    stage: str,
    tg_id: int,
) -> tuple[list[InducedPair], bool]:
    """Accept solver optima until the pool, the budget or feasibility runs out.

    The incremental cost of an acceptance is the optimum's soft cost: all
    previously committed decisions have had their soft clauses hardened
    away, so only the fresh decision's hypotheses are still priced.
    """
    accepted: list[InducedPair] = []
    while cnf.pool_index is not None:
        outcome = solve(cnf)
        if outcome is None:
            return accepted, True
        fresh = [v for v in pool if outcome.assignment[v]]
        # the canonical optimum turns on exactly one fresh decision
        var = min(fresh)
        cand = pool[var]
        cost = outcome.soft_cost
        if threshold is not None and not cost < threshold:
            break
        del pool[var]
        update_after_acceptance(cnf, sets, cand)
        anchor = cand.anchor if isinstance(cand, SynonymCandidate) else None
        accepted.append(
            InducedPair(cand.word_a, cand.word_c, stage, cost, tg_id, anchor)
        )
    return accepted, False


def run_cognate_stage(
    tg: Transgraph,
    candidates: list[PairCandidate],
    hp: HyperParams,
    one_to_one: bool = True,
) -> StageOutcome:
    sets = PipelineSets(
        existing_edges={e.key for e in tg.edges},
        new_edges={k for c in candidates for k in c.missing_edges},
        candidates=list(candidates),
    )
    if not candidates:
        return StageOutcome([], sets, False)
    cnf = encode_cognate_cnf(tg, candidates, sets, uniqueness=one_to_one)
    pool = {cnf.registry.id_of(cognate_desc(c.pair)): c for c in candidates}
    accepted, unsat = _run_stage(
        cnf, sets, pool, hp.cognate_threshold, COGNATE, tg.id
    )
    sets.rejected_candidates = [c for c in candidates if c.pair not in sets.results]
    for cand in sets.accepted_cognates:
        sets.anchor_pivots[cand.pair] = tuple(sorted(p.pivot for p in cand.paths))
    return StageOutcome(accepted, sets, unsat)


def cognate_synonym_probability(tg: Transgraph, cognate, syn_word: Word) -> float:
    """Share of the cognate's pivots the synonym word is already linked to.

    The cognate's pivots are those connected to both of its endpoints in
    the graph as given (pass the post-acceptance graph for exact pipeline
    semantics). Accepts an InducedPair or a plain (word_a, word_c) tuple.
    """
    wa, wc = cognate if isinstance(cognate, tuple) else (cognate.word_a, cognate.word_c)
    if syn_word.lang not in (wa.lang, wc.lang):
        raise ValueError(f"{syn_word} matches neither side of the cognate pair")
    anchor_pivots = set(tg.word_pivots.get(wa, ())) & set(tg.word_pivots.get(wc, ()))
    if not anchor_pivots:
        raise ValueError(f"cognate pair ({wa}, {wc}) shares no pivot")
    linked = anchor_pivots & set(tg.word_pivots.get(syn_word, ()))
    return len(linked) / len(anchor_pivots)


def _synonym_candidates(tg: Transgraph, sets: PipelineSets) -> list[SynonymCandidate]:
    """Propose partners sharing pivots with an accepted cognate's endpoints."""
    present = sets.existing_edges
    word_pivots: dict[Word, set[Word]] = {}
    pivot_a: dict[Word, set[Word]] = {}
    pivot_c: dict[Word, set[Word]] = {}
    for np_, pv, side in present:
        word_pivots.setdefault(np_, set()).add(pv)
        (pivot_a if side == SIDE_AB else pivot_c).setdefault(pv, set()).add(np_)

    by_pair: dict[tuple[Word, Word], SynonymCandidate] = {}

    def offer(cand: SynonymCandidate) -> None:
        # several cognates may suggest the same pair: keep the likeliest anchor
        prev = by_pair.get(cand.pair)
        if prev is None:
            by_pair[cand.pair] = cand
        elif cand.shared_prob > prev.shared_prob or (
            cand.shared_prob == prev.shared_prob and cand.anchor < prev.anchor
        ):
            by_pair[cand.pair] = cand

    for anchor in sorted(sets.accepted_cognates, key=lambda c: c.pair):
        wa, wc = anchor.pair
        pivots = sets.anchor_pivots[anchor.pair]
        for side, seed_word, neighbours in (
            (SIDE_BC, wc, pivot_c),
            (SIDE_AB, wa, pivot_a),
        ):
            partners: set[Word] = set()
            for b in pivots:
                partners |= neighbours.get(b, set())
            partners.discard(seed_word)
            for w in sorted(partners):
                pair = (wa, w) if side == SIDE_BC else (w, wc)
                if pair in sets.results:
                    continue
                linked = sum(1 for b in pivots if b in word_pivots.get(w, ()))
                missing = tuple(
                    sorted(
                        ((w, b, side) for b in pivots if (w, b, side) not in present),
                        key=edge_sort_key,
                    )
                )
                offer(
                    SynonymCandidate(
                        word_a=pair[0],
                        word_c=pair[1],
                        anchor=(wa, wc),
                        anchor_pivots=tuple(pivots),
                        shared_prob=linked / len(pivots),
                        missing_edges=missing,
                    )
                )
    return sorted(by_pair.values(), key=lambda c: c.pair)


def run_synonym_stage(tg: Transgraph, sets: PipelineSets, hp: HyperParams) -> StageOutcome:
    """Extract synonym partners of the accepted cognates; empty stage is fine."""
    syn_cands = _synonym_candidates(tg, sets)
    cnf = encode_synonym_cnf(tg, sets, syn_cands)
    if cnf is None:
        return StageOutcome([], sets, False)
    pool = {cnf.registry.id_of(synonym_desc(c.pair)): c for c in syn_cands}
    accepted, unsat = _run_stage(
        cnf, sets, pool, hp.synonym_threshold, SYNONYM, tg.id
    )
    return StageOutcome(accepted, sets, unsat)


def _induce_one(args) -> tuple[int, list[InducedPair], TransgraphReport]:
    tg, descriptor, hp = args
    cyc = run_cycles(tg, descriptor)
    st1 = run_cognate_stage(
        cyc.graph, cyc.candidates, hp, one_to_one=descriptor.method != "M"
    )
    pairs = list(st1.accepted)
    synonyms: list[InducedPair] = []
    syn_unsat = False
    if descriptor.method == "S":
        st2 = run_synonym_stage(cyc.graph, st1.sets, hp)
        synonyms = st2.accepted
        syn_unsat = st2.hard_unsat
        pairs += synonyms
    report = TransgraphReport(
        transgraph_id=tg.id,
        cycles_run=cyc.cycles_run,
        fixpoint=cyc.fixpoint,
        candidates=len(cyc.candidates),
        cognate_pairs=len(st1.accepted),
        synonym_pairs=len(synonyms),
        cognate_unsat=st1.hard_unsat,
        synonym_unsat=syn_unsat,
    )
    return tg.id, pairs, report


def induce_on_transgraphs(
    tset: TransgraphSet,
    descriptor: MethodDescriptor,
    hp: HyperParams | None = None,
    jobs: int = 1,
) -> InductionResult:
    """Run the per-transgraph pipeline and aggregate by transgraph id.

    Transgraphs are independent, so any worker count yields identical
    output; aggregation is ordered by id regardless of completion order.
    """
    hp = hp or HyperParams()
    graphs = sorted(tset.graphs, key=lambda g: g.id)
    tasks = [(g, descriptor, hp) for g in graphs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            outputs = list(executor.map(_induce_one, tasks))
    else:
        outputs = [_induce_one(t) for t in tasks]
    pairs: list[InducedPair] = []
    reports: dict[int, TransgraphReport] = {}
    for tg_id, ps, report in sorted(outputs, key=lambda o: o[0]):
        pairs.extend(ps)
        reports[tg_id] = report
    return InductionResult(tset.lang_a, tset.lang_c, pairs, reports, list(tset.skipped))


def run_pipeline(
    dict_ab: BilingualDictionary,
    dict_cb: BilingualDictionary,
    descriptor: MethodDescriptor,
    hp: HyperParams | None = None,
    *,
    max_edges: int = DEFAULT_MAX_EDGES,
    jobs: int = 1,
) -> InductionResult:
    """Dictionaries in, induced pair list out."""
    tset = filter_big(build_transgraphs(dict_ab, dict_cb), max_edges)
    return induce_on_transgraphs(tset, descriptor, hp, jobs=jobs)


def result_pair_set(result: InductionResult) -> PairSet:
    return PairSet(
        result.lang_a,
        result.lang_c,
        frozenset((p.word_a, p.word_c) for p in result.pairs),
    )


def render_report(result: InductionResult) -> str:
    """Human-readable per-transgraph diagnostics."""
    lines = []
    for tg_id in sorted(result.reports):
        r = result.reports[tg_id]
        flags = []
        if r.cognate_unsat:
            flags.append("cognate-stage-unsat")
        if r.synonym_unsat:
            flags.append("synonym-stage-unsat")
        suffix = f" [{', '.join(flags)}]" if flags else ""
        lines.append(
            f"transgraph {tg_id}: cycles={r.cycles_run}"
            f" fixpoint={'yes' if r.fixpoint else 'no'}"
            f" candidates={r.candidates}"
            f" cognates={r.cognate_pairs} synonyms={r.synonym_pairs}{suffix}"
        )
    for tg_id, edges in result.skipped:
        lines.append(f"skipped transgraph {tg_id} ({edges} edges)")
    lines.append(
        f"total pairs: {len(result.pairs)}"
        f" (cognate {sum(1 for p in result.pairs if p.stage == COGNATE)},"
        f" synonym {sum(1 for p in result.pairs if p.stage == SYNONYM)})"
    )
    return "\n".join(lines) + "\n"
