"""Exact weighted partial MaxSAT solving.

solve() is a branch-and-bound search with unit propagation over the hard
clauses; brute_force_solve() enumerates every assignment (vectorized) and
is the test oracle. Both return the same canonical optimum: minimal total
weight of falsified soft clauses, ties broken by preferring false for the
lowest-id variable, so results are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import MICRO, Clause, CnfFormula

BRUTE_FORCE_LIMIT = 25
_CHUNK_BITS = 20


@dataclass(frozen=True)
class SolveOutcome:
    assignment: dict[int, bool]
    soft_cost: float
    micro_cost: int


@dataclass(frozen=True)
class HardViolation:
    clause_index: int
    clause: Clause


def _validate(cnf: CnfFormula) -> int:
    if not cnf.hard and not cnf.soft:
        raise ValueError("formula is empty")
    nvars = cnf.nvars
    for clause in list(cnf.hard) + list(cnf.soft):
        for lit in clause.literals:
            if not 1 <= abs(lit) <= nvars:
                raise ValueError(f"literal {lit} outside 1..{nvars}")
    return nvars


def solve(cnf: CnfFormula) -> SolveOutcome | None:
    """Find the canonical optimum, or None if the hard clauses conflict."""
    n = _validate(cnf)
    search = _Search(n, cnf.hard, cnf.soft)
    return search.run()


class _Search:
    def __init__(self, nvars: int, hard: list[Clause], soft: list[Clause]):
        self.n = nvars
        self.hard = [c.literals for c in hard]
        self.soft = [c.literals for c in soft]
        self.smicro = [c.micro for c in soft]
        self.value = [0] * (nvars + 1)  # 0 unassigned, 1 true, -1 false

        self.h_occ_pos = [[] for _ in range(nvars + 1)]
        self.h_occ_neg = [[] for _ in range(nvars + 1)]
        for ci, lits in enumerate(self.hard):
            for lit in lits:
                (self.h_occ_pos if lit > 0 else self.h_occ_neg)[abs(lit)].append(ci)
        self.s_occ_pos = [[] for _ in range(nvars + 1)]
        self.s_occ_neg = [[] for _ in range(nvars + 1)]
        for ci, lits in enumerate(self.soft):
            for lit in lits:
                (self.s_occ_pos if lit > 0 else self.s_occ_neg)[abs(lit)].append(ci)

        self.h_sat = [0] * len(self.hard)  # satisfied-literal counts
        self.h_free = [len(c) for c in self.hard]
        self.s_sat = [0] * len(self.soft)
        self.s_free = [len(c) for c in self.soft]
        self.lb = 0  # micro weight of soft clauses already falsified
        self.trail: list[int] = []

    def _apply(self, var: int, val: bool) -> bool:
        """Record one assignment; returns False on a hard conflict."""
        self.value[var] = 1 if val else -1
        self.trail.append(var)
        pos_first = val
        conflict = False
        for ci in (self.h_occ_pos if pos_first else self.h_occ_neg)[var]:
            self.h_sat[ci] += 1
        for ci in (self.h_occ_neg if pos_first else self.h_occ_pos)[var]:
            self.h_free[ci] -= 1
            if self.h_sat[ci] == 0 and self.h_free[ci] == 0:
                conflict = True
        for ci in (self.s_occ_pos if pos_first else self.s_occ_neg)[var]:
            self.s_sat[ci] += 1
        for ci in (self.s_occ_neg if pos_first else self.s_occ_pos)[var]:
            self.s_free[ci] -= 1
            if self.s_sat[ci] == 0 and self.s_free[ci] == 0:
                self.lb += self.smicro[ci]
        return not conflict

    def _undo_one(self):
        var = self.trail.pop()
        val = self.value[var] > 0
        self.value[var] = 0
        for ci in (self.h_occ_pos if val else self.h_occ_neg)[var]:
            self.h_sat[ci] -= 1
        for ci in (self.h_occ_neg if val else self.h_occ_pos)[var]:
            self.h_free[ci] += 1
        for ci in (self.s_occ_pos if val else self.s_occ_neg)[var]:
            self.s_sat[ci] -= 1
        for ci in (self.s_occ_neg if val else self.s_occ_pos)[var]:
            self.s_free[ci] += 1
            if self.s_sat[ci] == 0 and self.s_free[ci] == 1:
                self.lb -= self.smicro[ci]

    def _undo_to(self, mark: int):
        while len(self.trail) > mark:
            self._undo_one()

    def _assign(self, var: int, val: bool) -> bool:
        """Assign and propagate hard units until fixpoint or conflict."""
        if not self._apply(var, val):
            return False
        queue = [var]
        while queue:
            v = queue.pop()
            sign = self.value[v] > 0
            for ci in (self.h_occ_neg if sign else self.h_occ_pos)[v]:
                if self.h_sat[ci] == 0 and self.h_free[ci] == 1:
                    forced = self._unassigned_literal(ci)
                    if forced is None:
                        continue
                    fv, fval = abs(forced), forced > 0
                    if not self._apply(fv, fval):
                        return False
                    queue.append(fv)
        return True

    def _unassigned_literal(self, ci: int) -> int | None:
        for lit in self.hard[ci]:
            if self.value[abs(lit)] == 0:
                return lit
        return None

    def _initial_propagate(self) -> bool:
        for ci, lits in enumerate(self.hard):
            if self.h_sat[ci] > 0 or self.h_free[ci] != 1:
                continue
            forced = self._unassigned_literal(ci)
            if forced is not None and not self._assign(abs(forced), forced > 0):
                return False
        return True

    def _next_unassigned(self, start: int) -> int | None:
        for v in range(start, self.n + 1):
            if self.value[v] == 0:
                return v
        return None

    def run(self) -> SolveOutcome | None:
        best_micro: int | None = None
        best_val: list[int] | None = None

        if not self._initial_propagate():
            return None

        def record():
            nonlocal best_micro, best_val
            best_micro = self.lb
            best_val = self.value[:]

        first = self._next_unassigned(1)
        if first is None:
            record()
        else:
            # frames: [var, next value index (0 false, 1 true, 2 done), mark]
            frames = [[first, 0, len(self.trail)]]
            while frames:
                var, vidx, mark = frames[-1]
                self._undo_to(mark)
                if vidx == 2:
                    frames.pop()
                    continue
                frames[-1][1] += 1
                ok = self._assign(var, vidx == 1)
                if not ok or (best_micro is not None and self.lb >= best_micro):
                    continue
                child = self._next_unassigned(var + 1)
                if child is None:
                    record()  # guarded by lb < best, so strictly better
                else:
                    frames.append([child, 0, len(self.trail)])
            self._undo_to(0)

        if best_micro is None:
            return None
        assignment = {v: best_val[v] > 0 for v in range(1, self.n + 1)}
        return SolveOutcome(assignment, best_micro / MICRO, best_micro)


def brute_force_solve(cnf: CnfFormula) -> SolveOutcome | None:
    """Exhaustive oracle with the same canonical tie-breaking as solve()."""
    n = _validate(cnf)
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{n} variables exceed the brute-force limit of {BRUTE_FORCE_LIMIT}")

    total = 1 << n
    chunk = 1 << min(_CHUNK_BITS, n)
    best_cost: int | None = None
    best_index: int | None = None

    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        codes = np.arange(lo, hi, dtype=np.int64)
        feasible = np.ones(hi - lo, dtype=bool)
        for clause in cnf.hard:
            feasible &= _clause_sat(codes, clause.literals, n)
        if not feasible.any():
            continue
        cost = np.zeros(hi - lo, dtype=np.int64)
        for clause in cnf.soft:
            sat = _clause_sat(codes, clause.literals, n)
            cost[~sat] += clause.micro
        cost[~feasible] = np.iinfo(np.int64).max
        i = int(np.argmin(cost))
        c = int(cost[i])
        if best_cost is None or c < best_cost:
            best_cost, best_index = c, lo + i

    if best_cost is None:
        return None
    assignment = {
        v: bool((best_index >> (n - v)) & 1) for v in range(1, n + 1)
    }
    return SolveOutcome(assignment, best_cost / MICRO, best_cost)


def _clause_sat(codes: np.ndarray, literals: tuple[int, ...], n: int) -> np.ndarray:
    sat = np.zeros(codes.shape, dtype=bool)
    for lit in literals:
        bit = (codes >> (n - abs(lit))) & 1
        sat |= (bit == 1) if lit > 0 else (bit == 0)
    return sat


def check_assignment(
    cnf: CnfFormula, assignment: dict[int, bool]
) -> float | HardViolation:
    """Soft cost of a total assignment, or the first violated hard clause."""
    n = _validate(cnf)
    for v in range(1, n + 1):
        if v not in assignment:
            raise ValueError(f"assignment misses variable {v}")

    def satisfied(lits: tuple[int, ...]) -> bool:
        return any(assignment[abs(l)] == (l > 0) for l in lits)

    for i, clause in enumerate(cnf.hard):
        if not satisfied(clause.literals):
            return HardViolation(i, clause)
    micro = sum(c.micro for c in cnf.soft if not satisfied(c.literals))
    return micro / MICRO
