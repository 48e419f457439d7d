"""Block-structured F2 algebra: safety, closure, amortized closure, restriction.

Coordinates of a width n*b space are grouped into n blocks of b bits;
coordinate (i, j) sits at flat index i*b + j.  A set of equation forms is
"safe" when any k independent vectors in its span touch at least k distinct
blocks; equivalently, one can pick rank-many columns in pairwise distinct
blocks that are linearly independent.  The closure is the unique minimal set
of blocks whose removal restores safety; the amortized closure is the
lexicographically largest block set that admits one independent column per
block.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import f2
from ._bits import bits_to_string, mask_bits, parity, string_to_bits
from .f2 import EMPTY, AffineSpace, rank_of_rows

SUBSET_SCAN_CAP = 24


class NotExtendableError(Exception):
    """The assignment matches no point of the space."""


@dataclass(frozen=True)
class BlockLayout:
    """n blocks of b bits each over a flat width of n*b coordinates."""

    n: int
    b: int

    def __post_init__(self):
        if self.n < 0 or self.b <= 0:
            raise ValueError("need n >= 0 and b >= 1")

    @property
    def width(self) -> int:
        return self.n * self.b

    def flat(self, i: int, j: int) -> int:
        if not (0 <= i < self.n and 0 <= j < self.b):
            raise ValueError("block coordinate out of range")
        return i * self.b + j

    def block_of(self, flat: int) -> int:
        return flat // self.b

    def block_mask(self, i: int) -> int:
        return mask_bits(self.b) << (i * self.b)

    def block_value(self, bits: int, i: int) -> int:
        return (bits >> (i * self.b)) & mask_bits(self.b)

    def blocks_touched(self, form: int) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if form & self.block_mask(i))

    def without(self, blocks: Iterable[int]) -> tuple["BlockLayout", tuple[int, ...]]:
        """Reduced layout after deleting blocks, with the kept original indices."""
        removed = set(blocks)
        kept = tuple(i for i in range(self.n) if i not in removed)
        return BlockLayout(len(kept), self.b), kept


def project_rows(rows: Sequence[int], layout: BlockLayout, kept_blocks: Sequence[int]) -> list[int]:
    """Drop the columns of all blocks not in kept_blocks, compacting indices."""
    out = []
    bmask = mask_bits(layout.b)
    for row in rows:
        new = 0
        for pos, blk in enumerate(kept_blocks):
            new |= ((row >> (blk * layout.b)) & bmask) << (pos * layout.b)
        out.append(new)
    return out


def _nonzero_columns(rows: Sequence[int], layout: BlockLayout) -> dict[int, list[tuple[int, int]]]:
    """Per block: list of (flat column index, column bitmask over row indices)."""
    by_block: dict[int, list[tuple[int, int]]] = {}
    for c in range(layout.width):
        col = 0
        for r, row in enumerate(rows):
            if (row >> c) & 1:
                col |= 1 << r
        if col:
            by_block.setdefault(layout.block_of(c), []).append((c, col))
    return by_block


def _independent(cols: Sequence[int]) -> bool:
    return rank_of_rows(cols) == len(cols)


def _augment(solution: list[tuple[int, int, int]], ground: dict[int, list[tuple[int, int]]]) -> list[tuple[int, int, int]] | None:
    """One matroid-intersection augmentation step.

    solution: common independent set as (block, col index, col mask) triples,
    at most one per block, column masks linearly independent.  ground maps a
    block to its usable columns.  Returns a larger solution or None.
    """
    in_sol = {(blk, c) for blk, c, _ in solution}
    used_blocks = {blk for blk, _, _ in solution}
    sol_masks = [m for _, _, m in solution]
    outside = [
        (blk, c, m)
        for blk, cols in ground.items()
        for c, m in cols
        if (blk, c) not in in_sol
    ]

    def m1_ok(without: int | None, extra: int) -> bool:
        masks = [m for idx, m in enumerate(sol_masks) if idx != without] + [extra]
        return _independent(masks)

    # BFS over alternating exchange arcs from M1-addable to M2-addable elements.
    start = [(i, y) for i, y in enumerate(outside) if m1_ok(None, y[2])]
    parents: dict[tuple[str, int], tuple[str, int] | None] = {}
    queue: list[tuple[str, int]] = []
    for i, _ in start:
        parents[("y", i)] = None
        queue.append(("y", i))
    goal: tuple[str, int] | None = None
    for i, y in start:
        if y[0] not in used_blocks:
            goal = ("y", i)
            break
    qi = 0
    while goal is None and qi < len(queue):
        kind, idx = queue[qi]
        qi += 1
        if kind == "y":
            blk = outside[idx][0]
            for j, (sblk, _, _) in enumerate(solution):
                if sblk == blk and ("x", j) not in parents:
                    parents[("x", j)] = (kind, idx)
                    queue.append(("x", j))
        else:
            for j, y in enumerate(outside):
                if ("y", j) in parents:
                    continue
                if m1_ok(idx, y[2]):
                    parents[("y", j)] = (kind, idx)
                    if y[0] not in used_blocks:
                        goal = ("y", j)
                        break
                    queue.append(("y", j))
    if goal is None:
        return None
    add: list[int] = []
    drop: list[int] = []
    node: tuple[str, int] | None = goal
    while node is not None:
        kind, idx = node
        (add if kind == "y" else drop).append(idx)
        node = parents[node]
    new_solution = [t for j, t in enumerate(solution) if j not in set(drop)]
    new_solution += [outside[j] for j in add]
    return new_solution


def _max_one_per_block(rows: Sequence[int], layout: BlockLayout, allowed_blocks: Iterable[int] | None = None) -> list[tuple[int, int, int]]:
    """Largest independent column set using at most one column per block."""
    ground = _nonzero_columns(rows, layout)
    if allowed_blocks is not None:
        allowed = set(allowed_blocks)
        ground = {blk: cols for blk, cols in ground.items() if blk in allowed}
    solution: list[tuple[int, int, int]] = []
    while True:
        bigger = _augment(solution, ground)
        if bigger is None:
            return solution
        solution = bigger


def is_safe(vecs: Sequence[int] | f2.FMat, layout: BlockLayout) -> bool:
    """True iff rank-many independent columns exist in pairwise distinct blocks."""
    rows = vecs.rows if isinstance(vecs, f2.FMat) else list(vecs)
    r = rank_of_rows(rows)
    if r == 0:
        return True
    return len(_max_one_per_block(rows, layout)) == r


def is_deviolator(vecs: Sequence[int] | f2.FMat, layout: BlockLayout, blocks: Iterable[int]) -> bool:
    rows = vecs.rows if isinstance(vecs, f2.FMat) else list(vecs)
    sub_layout, kept = layout.without(blocks)
    return is_safe(project_rows(rows, layout, kept), sub_layout)


def closure(vecs: Sequence[int] | f2.FMat, layout: BlockLayout) -> frozenset[int]:
    """The minimal deviolator, by iterated repair with smallest violating sets.

    A block set S violates when more than |S| independent span vectors live on
    its columns, i.e. rank(rows without S's columns) < rank(rows) - |S|.  Every
    smallest violating set is contained in the minimal deviolator, so adding
    them all and recursing converges to exactly the closure.
    """
    rows = list(vecs.rows if isinstance(vecs, f2.FMat) else vecs)
    found: set[int] = set()
    while True:
        sub_layout, kept = layout.without(found)
        proj = project_rows(rows, layout, kept)
        if is_safe(proj, sub_layout):
            return frozenset(found)
        if sub_layout.n > SUBSET_SCAN_CAP:
            raise f2.EnumerationCapError("closure violation scan needs <= %d blocks" % SUBSET_SCAN_CAP)
        r = rank_of_rows(proj)
        for size in range(1, sub_layout.n + 1):
            viols = [
                S
                for S in itertools.combinations(range(sub_layout.n), size)
                if rank_of_rows(project_rows(proj, sub_layout, [i for i in range(sub_layout.n) if i not in S])) < r - size
            ]
            if viols:
                for S in viols:
                    found.update(kept[i] for i in S)
                break


def blockset_sort_key(blocks: Iterable[int]) -> int:
    """Sort key realizing the block-set order: indicator read as a binary number.

    Equivalent to comparing descending-sorted index sequences elementwise with
    longer-prefix-wins.
    """
    return sum(1 << i for i in blocks)


def blockset_lex_ge(a: Iterable[int], b: Iterable[int]) -> bool:
    """Reference comparator: descending sequences, elementwise, longer prefix wins."""
    sa, sb = sorted(a, reverse=True), sorted(b, reverse=True)
    for x, y in zip(sa, sb):
        if x != y:
            return x > y
    return len(sa) >= len(sb)


def amortized_closure(vecs: Sequence[int] | f2.FMat, layout: BlockLayout) -> tuple[frozenset[int], tuple[tuple[int, int], ...]]:
    """Lexicographically largest acceptable block set plus certificate columns.

    Greedy from the highest block index: acceptable sets are downward closed,
    so including a block whenever the candidate set stays acceptable maximizes
    the indicator-number order.  The certificate pairs (block, flat column)
    have linearly independent columns, one per member block.
    """
    rows = list(vecs.rows if isinstance(vecs, f2.FMat) else vecs)
    ground = _nonzero_columns(rows, layout)
    chosen: list[int] = []
    solution: list[tuple[int, int, int]] = []
    for i in range(layout.n - 1, -1, -1):
        if i not in ground:
            continue
        candidate = {blk: cols for blk, cols in ground.items() if blk == i or blk in chosen}
        bigger = _augment(solution, candidate)
        if bigger is not None:
            chosen.append(i)
            solution = bigger
    cert = tuple(sorted((blk, c) for blk, c, _ in solution))
    return frozenset(chosen), cert


# Brute-force references used as oracles by the property suites.


def is_safe_bruteforce(rows: Sequence[int], layout: BlockLayout) -> bool:
    """Exhaustive column-choice form of the safety test."""
    r = rank_of_rows(rows)
    if r == 0:
        return True
    by_block = _nonzero_columns(rows, layout)
    blocks = sorted(by_block)
    for combo in itertools.combinations(blocks, r):
        for pick in itertools.product(*[by_block[blk] for blk in combo]):
            if _independent([m for _, m in pick]):
                return True
    return False


def is_safe_span_bruteforce(rows: Sequence[int], layout: BlockLayout) -> bool:
    """Direct span form: any k independent span vectors touch >= k blocks."""
    basis = [row for row in rows]
    r = rank_of_rows(basis)
    span = []
    reduced = []
    for row in basis:
        row2 = f2.reduce_against(row, reduced)
        if row2:
            reduced.append(row2)
    for coeffs in range(1, 1 << len(reduced)):
        v = 0
        for j in range(len(reduced)):
            if (coeffs >> j) & 1:
                v ^= reduced[j]
        span.append(v)
    for k in range(1, r + 1):
        for combo in itertools.combinations(span, k):
            if rank_of_rows(combo) < k:
                continue
            touched = set()
            for v in combo:
                touched |= layout.blocks_touched(v)
            if len(touched) < k:
                return False
    return True


def closure_bruteforce(rows: Sequence[int], layout: BlockLayout) -> frozenset[int]:
    """Minimum-size deviolator by scanning all block subsets; asserts uniqueness."""
    best: list[frozenset[int]] = []
    best_size = layout.n + 1
    for size in range(layout.n + 1):
        for S in itertools.combinations(range(layout.n), size):
            if is_deviolator(rows, layout, S):
                best = [frozenset(S)]
                best_size = size
                break
        if best:
            break
    for S in itertools.combinations(range(layout.n), best_size):
        fs = frozenset(S)
        if fs not in best and is_deviolator(rows, layout, S):
            best.append(fs)
    if len(best) != 1:
        raise AssertionError(f"minimum deviolator not unique: {best}")
    return best[0]


def acceptable_sets_bruteforce(rows: Sequence[int], layout: BlockLayout) -> list[frozenset[int]]:
    by_block = _nonzero_columns(rows, layout)
    blocks = sorted(by_block)
    out = [frozenset()]
    for size in range(1, len(blocks) + 1):
        for combo in itertools.combinations(blocks, size):
            ok = any(
                _independent([m for _, m in pick])
                for pick in itertools.product(*[by_block[blk] for blk in combo])
            )
            if ok:
                out.append(frozenset(combo))
    return out


def amortized_closure_bruteforce(rows: Sequence[int], layout: BlockLayout) -> frozenset[int]:
    best: frozenset[int] | None = None
    for S in acceptable_sets_bruteforce(rows, layout):
        if best is None or blockset_lex_ge(S, best):
            best = S
    assert best is not None
    return best


@dataclass(frozen=True)
class ClosureAssignment:
    """Full b-bit values for a set of blocks."""

    layout: BlockLayout
    entries: tuple[tuple[int, int], ...]  # (block, b-bit value), sorted by block

    def __post_init__(self):
        seen = set()
        for blk, val in self.entries:
            if not 0 <= blk < self.layout.n:
                raise ValueError("block out of range")
            if not 0 <= val < (1 << self.layout.b):
                raise ValueError("value out of range for block width")
            if blk in seen:
                raise ValueError("duplicate block")
            seen.add(blk)
        if tuple(sorted(self.entries)) != self.entries:
            raise ValueError("entries must be sorted by block")

    @classmethod
    def from_dict(cls, layout: BlockLayout, values: dict[int, int]) -> "ClosureAssignment":
        return cls(layout, tuple(sorted(values.items())))

    @classmethod
    def from_point(cls, layout: BlockLayout, blocks: Iterable[int], bits: int) -> "ClosureAssignment":
        return cls.from_dict(layout, {i: layout.block_value(bits, i) for i in blocks})

    @property
    def blocks(self) -> frozenset[int]:
        return frozenset(blk for blk, _ in self.entries)

    def value(self, block: int) -> int:
        for blk, val in self.entries:
            if blk == block:
                return val
        raise KeyError(block)

    def coordinate_pairs(self) -> list[tuple[int, int]]:
        """The assignment as unit-form equations over the full layout."""
        pairs = []
        for blk, val in self.entries:
            for j in range(self.layout.b):
                pairs.append((1 << self.layout.flat(blk, j), (val >> j) & 1))
        return pairs

    def fixed_bits(self) -> tuple[int, int]:
        """(mask, value) over the full width covering exactly the member blocks."""
        mask = 0
        value = 0
        for blk, val in self.entries:
            mask |= self.layout.block_mask(blk)
            value |= val << (blk * self.layout.b)
        return mask, value

    def to_text(self) -> str:
        return " ".join(f"{blk}:{bits_to_string(val, self.layout.b)}" for blk, val in self.entries)

    @classmethod
    def from_text(cls, layout: BlockLayout, text: str) -> "ClosureAssignment":
        values = {}
        for token in text.split():
            blk_s, val_s = token.split(":")
            values[int(blk_s)] = string_to_bits(val_s)
        return cls.from_dict(layout, values)


def is_extendable(a: AffineSpace, y: ClosureAssignment) -> bool:
    """True iff some point of the space agrees with the assignment."""
    if a.width != y.layout.width:
        raise ValueError("width mismatch")
    joint = f2.space_from_pairs(a.width, list(a.rows) + y.coordinate_pairs())
    return joint is not EMPTY


def substitute(a: AffineSpace, y: ClosureAssignment) -> AffineSpace | f2._EmptySpace:
    """Plug the assignment in and re-index onto the remaining blocks."""
    layout = y.layout
    if a.width != layout.width:
        raise ValueError("width mismatch")
    mask, value = y.fixed_bits()
    sub_layout, kept = layout.without(y.blocks)
    pairs = []
    for form, bit in a.rows:
        new_bit = bit ^ parity(form & mask & value)
        new_form = project_rows([form & ~mask], layout, kept)[0]
        pairs.append((new_form, new_bit))
    return f2.space_from_pairs(sub_layout.width, pairs)


def restrict(a: AffineSpace, y: ClosureAssignment) -> AffineSpace:
    """Restriction by a closure assignment; the result is a safe space."""
    cl = closure(a.forms(), y.layout)
    if y.blocks != cl:
        raise ValueError(f"assignment blocks {sorted(y.blocks)} differ from closure {sorted(cl)}")
    if not is_extendable(a, y):
        raise NotExtendableError("no point of the space matches the assignment")
    result = substitute(a, y)
    assert result is not EMPTY
    return result
