"""Minimum recovery sets per data symbol.

For a code with a full set of systematic columns, the dual codewords give the
recovery system directly: symbol i is served by its systematic column s_i as
a singleton, and by Supp(c) \\ {s_i} for every dual codeword c with c_{s_i}=1
(scalar multiples contribute the same support and are skipped).  For an
arbitrary generator matrix there is no such shortcut, so we fall back to an
exhaustive increasing-size search for inclusion-minimal spanning subsets,
bounded by a size cap.  Both paths emit sets in canonical (size, lexicographic)
order, 1-based, so results are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .codes import LinearCode, dual_codewords
from .fields import in_span

RecoverySet = tuple[int, ...]


@dataclass(frozen=True)
class RecoverySystem:
    """Per-symbol lists of minimum recovery sets for one code."""

    code: LinearCode
    per_symbol: tuple[tuple[RecoverySet, ...], ...]
    minimality_cap: Optional[int]

    def sets_for(self, symbol: int) -> tuple[RecoverySet, ...]:
        if not 1 <= symbol <= self.code.k:
            raise ValueError(f"symbol {symbol} out of range 1..{self.code.k}")
        return self.per_symbol[symbol - 1]

    def total_sets(self) -> int:
        return sum(len(sets) for sets in self.per_symbol)

    def to_json_dict(self) -> dict:
        return {
            "symbols": [
                {"index": i + 1, "sets": [list(s) for s in sets]}
                for i, sets in enumerate(self.per_symbol)
            ]
        }


def _canonical(sets) -> list[RecoverySet]:
    return sorted(set(sets), key=lambda s: (len(s), s))


def recovery_sets_systematic(code: LinearCode, symbol: int) -> list[RecoverySet]:
    """Minimum recovery sets of one symbol via the dual-codeword fast path."""
    if code.systematic_positions is None:
        raise ValueError(
            "code has no full systematic column set; use recovery_sets_general"
        )
    if not 1 <= symbol <= code.k:
        raise ValueError(f"symbol {symbol} out of range 1..{code.k}")
    s = code.systematic_positions[symbol - 1]
    sets = {(s,)}
    for c in dual_codewords(code):
        if c.entries[s - 1] == 1:
            sets.add(tuple(v for v in c.support if v != s))
    return _canonical(sets)


def _gf2_column_masks(code: LinearCode) -> list[int]:
    masks = []
    for j in range(code.n):
        m = 0
        for i, v in enumerate(code.generator.column(j)):
            if v:
                m |= 1 << i
        masks.append(m)
    return masks


def _gf2_spans(vectors: list[int], target: int) -> bool:
    lead: dict[int, int] = {}
    for v in vectors:
        while v:
            l = v.bit_length() - 1
            if l in lead:
                v ^= lead[l]
            else:
                lead[l] = v
                break
    t = target
    while t:
        l = t.bit_length() - 1
        if l not in lead:
            return False
        t ^= lead[l]
    return True


def _gfq_spans(columns: list[tuple[int, ...]], target: tuple[int, ...], q: int) -> bool:
    k = len(target)
    rows = [[col[i] for col in columns] + [target[i]] for i in range(k)]
    ncols = len(columns)
    r = 0
    for c in range(ncols + 1):
        pivot = None
        for i in range(r, k):
            if rows[i][c] % q != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if c == ncols:
            return False
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], -1, q)
        rows[r] = [(v * inv) % q for v in rows[r]]
        for i in range(k):
            if i != r and rows[i][c] % q != 0:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        r += 1
    return True


def recovery_sets_general(
    code: LinearCode, symbol: int, cap: int
) -> list[RecoverySet]:
    """All inclusion-minimal recovery sets of size <= cap, by exhaustive search.

    Subsets are scanned by increasing size with superset pruning, so every
    emitted set is minimal and, within the cap, the enumeration is complete.
    Cost grows as sum-of-binomials; intended for n <= 15 or modest caps.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    if not 1 <= symbol <= code.k:
        raise ValueError(f"symbol {symbol} out of range 1..{code.k}")
    n = code.n
    found: list[RecoverySet] = []
    found_masks: list[int] = []
    if code.q == 2:
        col_masks = _gf2_column_masks(code)
        target = 1 << (symbol - 1)
        for size in range(1, min(cap, n) + 1):
            for combo in itertools.combinations(range(n), size):
                cmask = 0
                for j in combo:
                    cmask |= 1 << j
                if any(fm & cmask == fm for fm in found_masks):
                    continue
                if _gf2_spans([col_masks[j] for j in combo], target):
                    found.append(tuple(j + 1 for j in combo))
                    found_masks.append(cmask)
    else:
        cols = [code.generator.column(j) for j in range(n)]
        target = tuple(1 if i == symbol - 1 else 0 for i in range(code.k))
        for size in range(1, min(cap, n) + 1):
            for combo in itertools.combinations(range(n), size):
                cmask = 0
                for j in combo:
                    cmask |= 1 << j
                if any(fm & cmask == fm for fm in found_masks):
                    continue
                if _gfq_spans([cols[j] for j in combo], target, code.q):
                    found.append(tuple(j + 1 for j in combo))
                    found_masks.append(cmask)
    return _canonical(found)


def build_recovery_system(
    code: LinearCode, cap: Optional[int] = None
) -> RecoverySystem:
    """Minimum recovery system for every data symbol.

    Uses the dual-codeword path whenever the code has a full systematic column
    set; otherwise runs the general search with ``cap`` (default n, i.e.
    complete minimal enumeration, which can be slow for long codes).
    """
    if code.systematic_positions is not None:
        per = tuple(
            tuple(recovery_sets_systematic(code, i)) for i in range(1, code.k + 1)
        )
        return RecoverySystem(code, per, None)
    used_cap = cap if cap is not None else code.n
    per = tuple(
        tuple(recovery_sets_general(code, i, used_cap))
        for i in range(1, code.k + 1)
    )
    return RecoverySystem(code, per, used_cap)


def validate_recovery_system(system: RecoverySystem) -> None:
    """Independent soundness/minimality re-check of every emitted set.

    Soundness solves the span membership through the generic matrix path
    (not the search's internal elimination).  Minimality is certified by
    checking all one-element-smaller subsets, which suffices: if any proper
    subset spanned the target, some co-dimension-1 subset would too.
    """
    code = system.code
    gen = code.generator
    for i, sets in enumerate(system.per_symbol, start=1):
        target = [1 if t == i - 1 else 0 for t in range(code.k)]
        seen = set()
        for members in sets:
            if members in seen:
                raise ValueError(f"duplicate recovery set {members} for symbol {i}")
            seen.add(members)
            if list(members) != sorted(set(members)):
                raise ValueError(f"set {members} not strictly ascending")
            if members[0] < 1 or members[-1] > code.n:
                raise ValueError(f"set {members} out of range 1..{code.n}")
            cols = gen.select_columns([m - 1 for m in members])
            if in_span(cols, target) is None:
                raise ValueError(f"set {members} does not recover symbol {i}")
            for drop in range(len(members)):
                sub = members[:drop] + members[drop + 1 :]
                if not sub:
                    continue
                cols = gen.select_columns([m - 1 for m in sub])
                if in_span(cols, target) is not None:
                    raise ValueError(f"set {members} is not minimal for symbol {i}")
        for a in sets:
            for b in sets:
                if a != b and set(a) <= set(b):
                    raise ValueError(f"{a} is a subset of {b} for symbol {i}")


@dataclass(frozen=True)
class StructureReport:
    """Counts describing the recovery system of a systematic Hamming code."""

    cardinality_histogram: dict[int, int]
    nonsingleton_per_symbol: tuple[int, ...]
    incidence_range: tuple[int, int]
    t_counts: Optional[dict[int, int]]
    cardinality_law_ok: bool
    count_law_ok: bool
    incidence_law_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.cardinality_law_ok and self.count_law_ok and self.incidence_law_ok


def structure_report(system: RecoverySystem) -> StructureReport:
    """Check the structural laws of a systematic Ham(r, q) recovery system:
    cardinalities in {1, q^(r-1)-1}, exactly q^(r-1) non-singleton sets per
    symbol, and every other node incident to (q-1)q^(r-2) of a symbol's sets.
    """
    code = system.code
    if code.systematic_positions is None:
        raise ValueError("structure report requires a systematic code")
    q, r = code.q, code.r
    expected_size = q ** (r - 1) - 1
    expected_count = q ** (r - 1)
    expected_incidence = (q - 1) * q ** (r - 2)

    histogram: dict[int, int] = {}
    nonsingleton = []
    incidences = []
    for i, sets in enumerate(system.per_symbol, start=1):
        s = code.systematic_positions[i - 1]
        nonsingleton.append(sum(1 for m in sets if len(m) > 1))
        per_node: dict[int, int] = {j: 0 for j in range(1, code.n + 1) if j != s}
        for members in sets:
            histogram[len(members)] = histogram.get(len(members), 0) + 1
            for v in members:
                if v != s:
                    per_node[v] += 1
        incidences.extend(per_node.values())

    t_counts = None
    if code.q == 2:
        t_counts = {
            t: count_by_nonsystematic_nodes(system, t) for t in range(0, r + 1)
        }
    return StructureReport(
        cardinality_histogram=dict(sorted(histogram.items())),
        nonsingleton_per_symbol=tuple(nonsingleton),
        incidence_range=(min(incidences), max(incidences)),
        t_counts=t_counts,
        cardinality_law_ok=set(histogram) <= {1, expected_size},
        count_law_ok=all(c == expected_count for c in nonsingleton),
        incidence_law_ok=all(v == expected_incidence for v in incidences),
    )


def count_by_nonsystematic_nodes(system: RecoverySystem, t: int) -> int:
    """Non-singleton sets (over all symbols) with exactly t non-systematic nodes.

    Binary systematic codes only.  For 1 <= t <= r the count equals
    C(r, t) * (2^(r-1) - t); no recovery set avoids the parity columns
    entirely, so t = 0 always yields 0.
    """
    code = system.code
    if code.q != 2:
        raise ValueError("composition counts are defined for q = 2 only")
    if code.systematic_positions is None:
        raise ValueError("composition counts require a systematic code")
    if not 0 <= t <= code.r:
        raise ValueError(f"t must be in 0..{code.r}, got {t}")
    parity_nodes = set(range(1, code.n + 1)) - set(code.systematic_positions)
    count = 0
    for sets in system.per_symbol:
        for members in sets:
            if len(members) > 1 and sum(1 for v in members if v in parity_nodes) == t:
                count += 1
    return count
