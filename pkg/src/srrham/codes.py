"""q-ary Hamming codes: construction, import validation, dual enumeration.

Two deterministic layouts are provided.  ``classic_hamming`` orders the
parity-check columns by counting (for q=2 column i is the binary expansion of
i, most significant bit on top) and places the data symbols at the columns of
weight >= 2, which is the usual textbook presentation.  ``systematic_hamming``
produces the standard form G = [I_k | P], H = [-P^T | I_r].  Either way the
code is a [(q^r-1)/(q-1), n-r, 3] code whose dual has all nonzero words of
weight q^(r-1).

All coordinates in reported sets and JSON are 1-based.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional, Sequence

from .fields import FieldMatrix, is_prime, kernel_basis, rank

DISTANCE_BRUTE_CAP = 2 ** 20


def hamming_length(r: int, q: int) -> int:
    return (q ** r - 1) // (q - 1)


@dataclass(frozen=True)
class Codeword:
    """A codeword with its cached nonzero support (1-based)."""

    entries: tuple[int, ...]
    support: tuple[int, ...]

    @classmethod
    def from_entries(cls, entries: Sequence[int]) -> "Codeword":
        ent = tuple(entries)
        return cls(ent, tuple(i + 1 for i, v in enumerate(ent) if v != 0))

    @property
    def weight(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class LinearCode:
    """A q-ary Hamming code with both describing matrices.

    ``systematic_positions`` lists, for each data symbol i, the 1-based
    generator column equal to a nonzero multiple of e_i; it is None when no
    full set of k such columns exists.  ``distances_assumed`` marks d/d_dual
    taken from the closed forms instead of brute-force enumeration (only
    happens when q^k exceeds the enumeration cap).
    """

    q: int
    r: int
    n: int
    k: int
    generator: FieldMatrix
    parity_check: FieldMatrix
    systematic_positions: Optional[tuple[int, ...]]
    d: int
    d_dual: int
    distances_assumed: bool

    def __post_init__(self) -> None:
        if not self.generator.mul(self.parity_check.transpose()).is_zero():
            raise ValueError("generator and parity check are not orthogonal")

    def systematic_column(self, symbol: int) -> Optional[int]:
        """1-based column storing data symbol ``symbol`` uncoded, if any."""
        if not 1 <= symbol <= self.k:
            raise ValueError(f"symbol {symbol} out of range 1..{self.k}")
        if self.systematic_positions is not None:
            return self.systematic_positions[symbol - 1]
        return scaled_unit_columns(self.generator).get(symbol)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "n": self.n,
            "k": self.k,
            "generator": self.generator.to_lists(),
            "parity_check": self.parity_check.to_lists(),
            "systematic_positions": (
                list(self.systematic_positions)
                if self.systematic_positions is not None
                else None
            ),
        }


def subspace_representatives(r: int, q: int) -> list[tuple[int, ...]]:
    """One vector per 1-dimensional subspace of GF(q)^r.

    Representatives are normalized to leading coefficient 1 and ordered
    lexicographically as base-q digit strings (for q=2 this is exactly the
    counting order 1, 2, 3, ...).
    """
    reps = []
    for value in range(1, q ** r):
        digits = []
        v = value
        for _ in range(r):
            digits.append(v % q)
            v //= q
        vec = tuple(reversed(digits))
        first = next(x for x in vec if x != 0)
        if first == 1:
            reps.append(vec)
    return reps


def build_parity_check(r: int, q: int) -> FieldMatrix:
    """Parity-check matrix of Ham(r, q): one column per 1-dim subspace."""
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    cols = subspace_representatives(r, q)
    return FieldMatrix(q, tuple(tuple(col[i] for col in cols) for i in range(r)))


def _column_weight(col: Sequence[int]) -> int:
    return sum(1 for v in col if v != 0)


@functools.lru_cache(maxsize=None)
def systematic_hamming(r: int, q: int) -> LinearCode:
    """Standard-form Ham(r, q): G = [I_k | P], H = [-P^T | I_r].

    The left block of H collects the weight->=2 canonical columns in their
    lexicographic order; each parity column of G then has weight q^(r-1) - 1.
    """
    h0 = build_parity_check(r, q)
    n, k = h0.cols, h0.cols - r
    heavy = [j for j in range(n) if _column_weight(h0.column(j)) >= 2]
    unit = [j for j in range(n) if _column_weight(h0.column(j)) == 1]
    # Order the identity block so column k+m is e_m.
    unit.sort(key=lambda j: next(i for i, v in enumerate(h0.column(j)) if v != 0))
    h = h0.select_columns(heavy + unit)
    b_cols = [h.column(j) for j in range(k)]
    gen_rows = []
    for i in range(k):
        row = [1 if j == i else 0 for j in range(k)]
        row += [(-b_cols[i][m]) % q for m in range(r)]
        gen_rows.append(tuple(row))
    generator = FieldMatrix(q, tuple(gen_rows))
    return _finish_code(generator, h, q, r, tuple(range(1, k + 1)))


@functools.lru_cache(maxsize=None)
def classic_hamming(r: int, q: int) -> LinearCode:
    """Ham(r, q) with counting-ordered H and data symbols at weight->=2 columns."""
    h = build_parity_check(r, q)
    n, k = h.cols, h.cols - r
    data = [j for j in range(n) if _column_weight(h.column(j)) >= 2]
    parity = {}
    for j in range(n):
        col = h.column(j)
        if _column_weight(col) == 1:
            parity[next(i for i, v in enumerate(col) if v != 0)] = j
    gen_rows = []
    for i in range(k):
        row = [0] * n
        row[data[i]] = 1
        for m in range(r):
            row[parity[m]] = (-h.entries[m][data[i]]) % q
        gen_rows.append(tuple(row))
    generator = FieldMatrix(q, tuple(gen_rows))
    return _finish_code(generator, h, q, r, tuple(j + 1 for j in data))


def scaled_unit_columns(generator: FieldMatrix) -> dict[int, int]:
    """Map data symbol -> 1-based generator column equal to a scaled e_i."""
    out: dict[int, int] = {}
    for j in range(generator.cols):
        col = generator.column(j)
        nonzero = [i for i, v in enumerate(col) if v != 0]
        if len(nonzero) == 1:
            symbol = nonzero[0] + 1
            out.setdefault(symbol, j + 1)
    return out


def _min_weight_binary(rows: list[tuple[int, ...]]) -> int:
    masks = []
    for row in rows:
        m = 0
        for v in row:
            m = (m << 1) | (v & 1)
        masks.append(m)
    words = [0]
    for m in masks:
        words += [w ^ m for w in words]
    return min(w.bit_count() for w in words if w)


def _min_weight_general(rows: list[tuple[int, ...]], q: int) -> int:
    words = [tuple([0] * len(rows[0]))]
    for row in rows:
        scaled = [tuple((a * row[j]) % q for j in range(len(row))) for a in range(q)]
        words = [
            tuple((w[j] + s[j]) % q for j in range(len(w)))
            for w in words
            for s in scaled
        ]
    return min(sum(1 for v in w if v) for w in words if any(w))


def _min_weight(matrix: FieldMatrix) -> int:
    rows = list(matrix.entries)
    if matrix.q == 2:
        return _min_weight_binary(rows)
    return _min_weight_general(rows, matrix.q)


def _finish_code(
    generator: FieldMatrix,
    parity_check: FieldMatrix,
    q: int,
    r: int,
    systematic_positions: Optional[tuple[int, ...]],
    distance_cap: int = DISTANCE_BRUTE_CAP,
) -> LinearCode:
    n, k = generator.cols, generator.rows
    d_dual = _min_weight(parity_check)
    if q ** k <= distance_cap:
        d = _min_weight(generator)
        assumed = False
    else:
        d = 3
        assumed = True
    return LinearCode(
        q=q,
        r=r,
        n=n,
        k=k,
        generator=generator,
        parity_check=parity_check,
        systematic_positions=systematic_positions,
        d=d,
        d_dual=d_dual,
        distances_assumed=assumed,
    )


def import_generator(
    entries: Sequence[Sequence[int]],
    q: int,
    distance_cap: int = DISTANCE_BRUTE_CAP,
    parity_check: Optional[FieldMatrix] = None,
) -> LinearCode:
    """Accept an arbitrary k x n generator matrix of a Hamming code.

    The parity check is a kernel basis of the rows (or the caller-provided
    one, after checking orthogonality); the import is rejected unless the dual
    columns are nonzero, pairwise independent, and cover every 1-dimensional
    subspace (which pins n = (q^r-1)/(q-1) and d = 3).
    """
    generator = FieldMatrix.from_rows(entries, q)
    n, k = generator.cols, generator.rows
    if rank(generator) != k:
        raise ValueError(f"generator has rank deficit: rank < {k}")
    r = n - k
    if r < 2 or hamming_length(r, q) != n:
        raise ValueError(
            "parity check violates Hamming property: "
            f"length {n} incompatible with redundancy {r}"
        )
    if parity_check is None:
        parity_check = kernel_basis(generator)
    elif rank(parity_check) != r or not generator.mul(
        parity_check.transpose()
    ).is_zero():
        raise ValueError("provided parity check does not match the generator")
    if parity_check.rows != r:
        raise ValueError("dual dimension mismatch")
    reps = set()
    for j in range(n):
        col = parity_check.column(j)
        nonzero = [v for v in col if v != 0]
        if not nonzero:
            raise ValueError("parity check violates Hamming property: zero column")
        inv = pow(nonzero[0], -1, q)
        reps.add(tuple((v * inv) % q for v in col))
    if len(reps) != n:
        raise ValueError(
            "parity check violates Hamming property: dependent column pair"
        )
    unit_cols = scaled_unit_columns(generator)
    positions = (
        tuple(unit_cols[i] for i in range(1, k + 1))
        if all(i in unit_cols for i in range(1, k + 1))
        else None
    )
    return _finish_code(generator, parity_check, q, r, positions, distance_cap)


@functools.lru_cache(maxsize=None)
def dual_codewords(code: LinearCode) -> tuple[Codeword, ...]:
    """All q^r codewords of the dual (simplex) code, in span-enumeration order."""
    q = code.q
    n = code.n
    words = [tuple([0] * n)]
    for row in code.parity_check.entries:
        scaled = [tuple((a * row[j]) % q for j in range(n)) for a in range(q)]
        words = [
            tuple((w[j] + s[j]) % q for j in range(n)) for w in words for s in scaled
        ]
    return tuple(Codeword.from_entries(w) for w in words)


def codewords_with_unit_at(code: LinearCode, i: int) -> list[Codeword]:
    """Dual codewords with a 1 in coordinate i (1-based)."""
    if not 1 <= i <= code.n:
        raise ValueError(f"coordinate {i} out of range 1..{code.n}")
    return [c for c in dual_codewords(code) if c.entries[i - 1] == 1]


def odd_weight_columns(matrix: FieldMatrix) -> list[int]:
    """1-based indices of columns with odd Hamming weight."""
    return [
        j + 1
        for j in range(matrix.cols)
        if _column_weight(matrix.column(j)) % 2 == 1
    ]


def odd_weight_column_count(code: LinearCode) -> int:
    """O_w: number of odd-weight generator columns (binary codes only)."""
    if code.q != 2:
        raise ValueError("odd-weight column count is defined for q = 2 only")
    return len(odd_weight_columns(code.generator))


def code_from_json_dict(data: dict) -> LinearCode:
    """Rebuild a code from the canonical JSON layout (validating on import)."""
    q = int(data["q"])
    pc = None
    if data.get("parity_check") is not None:
        pc = FieldMatrix.from_rows(data["parity_check"], q)
    code = import_generator(data["generator"], q, parity_check=pc)
    for key in ("n", "k", "r"):
        if key in data and int(data[key]) != getattr(code, key):
            raise ValueError(f"inconsistent code file: field {key!r} mismatch")
    return code
