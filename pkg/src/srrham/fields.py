"""Exact arithmetic foundations: prime-field scalars and matrices, rationals.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.  Matrices store
plain ints (fully reduced mod q); ``FieldElement`` wraps a single scalar for
callers that want checked arithmetic.  Rationals are ``fractions.Fraction``:
arbitrary precision, always in lowest terms, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational written as ``p`` or ``p/q`` (no decimals)."""
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"expected an exact rational like 7/3, got {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Canonical string form: ``p`` for integers, ``p/q`` otherwise."""
    return str(Fraction(x))


@dataclass(frozen=True)
class FieldElement:
    """A fully reduced element of the prime field GF(q)."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} not reduced mod {self.modulus}")

    def _same_field(self, other: "FieldElement") -> None:
        if self.modulus != other.modulus:
            raise ValueError(
                f"modulus mismatch: {self.modulus} vs {other.modulus}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        return FieldElement((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        return FieldElement((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        return FieldElement((self.value * other.value) % self.modulus, self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement((-self.value) % self.modulus, self.modulus)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError(f"no inverse for 0 in GF({self.modulus})")
        return FieldElement(pow(self.value, -1, self.modulus), self.modulus)


@dataclass(frozen=True)
class FieldMatrix:
    """Dense matrix over GF(q); entries are ints in [0, q) sharing one modulus."""

    q: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not is_prime(self.q):
            raise ValueError(f"modulus {self.q} is not prime")
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        for row in self.entries:
            for v in row:
                if not 0 <= v < self.q:
                    raise ValueError(f"entry {v} not reduced mod {self.q}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], q: int) -> "FieldMatrix":
        return cls(q, tuple(tuple(v % q for v in row) for row in rows))

    @classmethod
    def identity(cls, n: int, q: int) -> "FieldMatrix":
        return cls(q, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def element(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.entries[i][j], self.q)

    def select_columns(self, indices: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix(self.q, tuple(tuple(row[j] for j in indices) for row in self.entries))

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.q, tuple(zip(*self.entries)) if self.entries else ())

    def mul(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.q != other.q:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = other.transpose().entries
        q = self.q
        return FieldMatrix(
            q,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) % q for col in cols)
                for row in self.entries
            ),
        )

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def rref(m: FieldMatrix) -> tuple[FieldMatrix, tuple[int, ...], int]:
    """Reduced row echelon form over GF(q).

    Returns (reduced matrix, ascending pivot columns, rank).  Pivot selection
    is deterministic: first usable row per column, scanning columns left to
    right.
    """
    q = m.q
    work = [list(row) for row in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if work[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = pow(work[r][c], -1, q)
        if inv != 1:
            work[r] = [(v * inv) % q for v in work[r]]
        for i in range(nrows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [(a - f * b) % q for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return FieldMatrix(q, tuple(tuple(row) for row in work)), tuple(pivots), r


def rank(m: FieldMatrix) -> int:
    return rref(m)[2]


def in_span(columns: FieldMatrix, target: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Solve ``columns @ x = target`` over GF(q).

    Returns the coefficient vector (ints mod q) when the target lies in the
    column span, None otherwise.
    """
    if len(target) != columns.rows:
        raise ValueError(
            f"target length {len(target)} != {columns.rows} rows"
        )
    q = columns.q
    aug = FieldMatrix(
        q,
        tuple(
            row + (target[i] % q,) for i, row in enumerate(columns.entries)
        ),
    )
    reduced, pivots, _ = rref(aug)
    if columns.cols in pivots:
        return None
    coeffs = [0] * columns.cols
    for i, p in enumerate(pivots):
        coeffs[p] = reduced.entries[i][columns.cols]
    return tuple(coeffs)


def kernel_basis(m: FieldMatrix) -> FieldMatrix:
    """Basis (as rows) of the right kernel {x : m @ x = 0} over GF(q)."""
    q = m.q
    reduced, pivots, rk = rref(m)
    ncols = m.cols
    free = [j for j in range(ncols) if j not in set(pivots)]
    rows = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for i, p in enumerate(pivots):
            vec[p] = (-reduced.entries[i][f]) % q
        rows.append(tuple(vec))
    return FieldMatrix(q, tuple(rows))
