"""Bit-packed linear algebra over F2.

Vectors and equation systems are stored as Python ints used as bitsets;
coordinate i of a width-w vector is bit i (little-endian by index, and the
textual form puts coordinate 0 leftmost).  Affine spaces are kept eagerly
normalized in reduced row-echelon form, so two spaces are equal as sets
exactly when their dataclass fields compare equal.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._bits import bits_to_string, iter_bits, mask_bits, parity, string_to_bits

ENUMERATION_CAP = 26


class EnumerationCapError(Exception):
    """Raised when an exhaustive enumeration would exceed the configured cap."""


class EmptySpaceError(Exception):
    """Raised when an operation requires a non-empty affine space."""


@dataclass(frozen=True)
class FVec:
    """A vector in F2^width."""

    width: int
    bits: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be nonnegative")
        if not 0 <= self.bits <= mask_bits(self.width):
            raise ValueError("bits out of range for width")

    @classmethod
    def zero(cls, width: int) -> "FVec":
        return cls(width, 0)

    @classmethod
    def unit(cls, width: int, i: int) -> "FVec":
        if not 0 <= i < width:
            raise ValueError("coordinate out of range")
        return cls(width, 1 << i)

    @classmethod
    def from_string(cls, s: str) -> "FVec":
        return cls(len(s), string_to_bits(s))

    def get(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise IndexError("coordinate out of range")
        return (self.bits >> i) & 1

    def dot(self, other: "FVec") -> int:
        if self.width != other.width:
            raise ValueError("width mismatch")
        return parity(self.bits & other.bits)

    def __xor__(self, other: "FVec") -> "FVec":
        if self.width != other.width:
            raise ValueError("width mismatch")
        return FVec(self.width, self.bits ^ other.bits)

    def support(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def is_zero(self) -> bool:
        return self.bits == 0

    def to_string(self) -> str:
        return bits_to_string(self.bits, self.width)

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class FMat:
    """A list of rows sharing one width."""

    width: int
    rows: tuple[int, ...]

    @classmethod
    def from_vecs(cls, vecs: Sequence[FVec]) -> "FMat":
        if not vecs:
            raise ValueError("cannot infer width from empty sequence; use FMat(width, ())")
        width = vecs[0].width
        for v in vecs:
            if v.width != width:
                raise ValueError("rows must share a width")
        return cls(width, tuple(v.bits for v in vecs))

    def row_vecs(self) -> tuple[FVec, ...]:
        return tuple(FVec(self.width, r) for r in self.rows)

    def __len__(self) -> int:
        return len(self.rows)


def rank_of_rows(rows: Sequence[int]) -> int:
    """Rank of int-bitset rows via elimination on the lowest set bit."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
    return len(basis)


def rank(m: FMat) -> int:
    return rank_of_rows(m.rows)


def reduce_against(row: int, basis: Sequence[int]) -> int:
    """Reduce a row against pivot-reduced basis rows (lowest set bit pivots)."""
    for b in basis:
        low = b & -b
        if row & low:
            row ^= b
    return row


def _rref(pairs: list[tuple[int, int]]) -> list[tuple[int, int]] | None:
    """Reduced row-echelon form of (form, bit) pairs; None if inconsistent.

    Pivot of a row is its lowest set bit; result rows are sorted by pivot and
    every pivot appears in exactly one row.
    """
    rows: list[tuple[int, int]] = []
    for form, bit in pairs:
        for f, c in rows:
            low = f & -f
            if form & low:
                form ^= f
                bit ^= c
        if form == 0:
            if bit == 1:
                return None
            continue
        low = form & -form
        rows = [(f ^ form if f & low else f, c ^ bit if f & low else c) for f, c in rows]
        rows.append((form, bit))
    rows.sort(key=lambda fc: fc[0] & -fc[0])
    return rows


class _EmptySpace:
    """Distinguished empty result so set algebra composes without exceptions."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY"

    def __bool__(self) -> bool:
        return False


EMPTY = _EmptySpace()


@dataclass(frozen=True)
class AffineSpace:
    """A non-empty affine subspace {x : <form_i, x> = bit_i for all i}.

    Stored in reduced row-echelon form; construct via `affine_from_equations`,
    `full_space` or the intersection helpers, which return EMPTY on an
    inconsistent system.
    """

    width: int
    rows: tuple[tuple[int, int], ...]

    @property
    def codim(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return self.width - len(self.rows)

    def size(self) -> int:
        return 1 << self.dim

    def forms(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.rows)

    def pivots(self) -> tuple[int, ...]:
        return tuple((f & -f).bit_length() - 1 for f, _ in self.rows)

    def free_coords(self) -> tuple[int, ...]:
        piv = set(self.pivots())
        return tuple(i for i in range(self.width) if i not in piv)

    def contains_bits(self, x: int) -> bool:
        return all(parity(x & f) == c for f, c in self.rows)

    def contains(self, x: FVec) -> bool:
        if x.width != self.width:
            raise ValueError("width mismatch")
        return self.contains_bits(x.bits)

    def equations(self) -> tuple[tuple[FVec, int], ...]:
        return tuple((FVec(self.width, f), c) for f, c in self.rows)

    def to_text(self) -> str:
        return "\n".join(f"{bits_to_string(f, self.width)} = {c}" for f, c in self.rows)


def full_space(width: int) -> AffineSpace:
    return AffineSpace(width, ())


def affine_from_equations(eqs: FMat, rhs: FVec) -> AffineSpace | _EmptySpace:
    """Normalize an equation system into a space, or EMPTY if inconsistent."""
    if rhs.width != len(eqs.rows):
        raise ValueError("rhs length must equal the number of equation rows")
    pairs = [(row, (rhs.bits >> i) & 1) for i, row in enumerate(eqs.rows)]
    rows = _rref(pairs)
    if rows is None:
        return EMPTY
    return AffineSpace(eqs.width, tuple(rows))


def space_from_pairs(width: int, pairs: Sequence[tuple[int, int]]) -> AffineSpace | _EmptySpace:
    rows = _rref(list(pairs))
    if rows is None:
        return EMPTY
    return AffineSpace(width, tuple(rows))


def intersect(a: AffineSpace | _EmptySpace, form: FVec, bit: int) -> AffineSpace | _EmptySpace:
    """Intersect with one equation {x : <form, x> = bit}."""
    if a is EMPTY:
        return EMPTY
    if form.width != a.width:
        raise ValueError("width mismatch")
    return space_from_pairs(a.width, list(a.rows) + [(form.bits, bit & 1)])


def intersect_space(a: AffineSpace | _EmptySpace, b: AffineSpace | _EmptySpace) -> AffineSpace | _EmptySpace:
    if a is EMPTY or b is EMPTY:
        return EMPTY
    if a.width != b.width:
        raise ValueError("width mismatch")
    return space_from_pairs(a.width, list(a.rows) + list(b.rows))


def is_subspace(inner: AffineSpace | _EmptySpace, outer: AffineSpace | _EmptySpace) -> bool:
    """True iff inner, as a point set, is contained in outer."""
    if inner is EMPTY:
        return True
    if outer is EMPTY:
        return False
    return intersect_space(inner, outer) == inner


def _solve_pivots(space: AffineSpace, free_bits: int) -> int:
    """Complete an assignment of the free coordinates to a member point."""
    x = free_bits
    for f, c in space.rows:
        low = f & -f
        if parity(x & (f ^ low)) != c:
            x |= low
    return x


def sample_point(a: AffineSpace | _EmptySpace, rng: random.Random) -> FVec:
    """Uniform member: free coordinates drawn uniformly, pivots solved."""
    if a is EMPTY:
        raise EmptySpaceError("cannot sample from EMPTY")
    free = a.free_coords()
    bits = 0
    for i in free:
        if rng.getrandbits(1):
            bits |= 1 << i
    return FVec(a.width, _solve_pivots(a, bits))


def enumerate_points(a: AffineSpace | _EmptySpace, cap: int = ENUMERATION_CAP) -> Iterator[FVec]:
    """All members in deterministic order (counter over free coordinates)."""
    if a is EMPTY:
        return
    free = a.free_coords()
    if len(free) > cap:
        raise EnumerationCapError(f"free dimension {len(free)} exceeds cap {cap}")
    for counter in range(1 << len(free)):
        bits = 0
        for j, i in enumerate(free):
            if (counter >> j) & 1:
                bits |= 1 << i
        yield FVec(a.width, _solve_pivots(a, bits))


def points_array(a: AffineSpace | _EmptySpace, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """All members as a uint64 array of bitmasks (width <= 63 only)."""
    if a is EMPTY:
        return np.zeros(0, dtype=np.uint64)
    if a.width > 63:
        raise ValueError("points_array supports width <= 63")
    free = a.free_coords()
    if len(free) > cap:
        raise EnumerationCapError(f"free dimension {len(free)} exceeds cap {cap}")
    base = _solve_pivots(a, 0)
    pts = np.array([base], dtype=np.uint64)
    for i in free:
        shifted = _solve_pivots(a, 1 << i) ^ base
        pts = np.concatenate([pts, pts ^ np.uint64(shifted)])
    return pts


def random_space(width: int, n_rows: int, rng: random.Random) -> AffineSpace | _EmptySpace:
    """Random equation system; mostly a test helper."""
    eqs = FMat(width, tuple(rng.getrandbits(width) for _ in range(n_rows)))
    rhs = FVec(n_rows, rng.getrandbits(n_rows) if n_rows else 0)
    return affine_from_equations(eqs, rhs)
