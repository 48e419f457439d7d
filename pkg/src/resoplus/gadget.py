"""Boolean gadgets: truth tables, Walsh spectra, lifting, preimage counting.

Spectra are exact dyadic rationals (integer numerators over 2^b).  The
working convention for all norm bounds is PM_ONE, the spectrum of (-1)^g;
the literal 0/1 spectrum is computable but never used in bounds because its
empty-set coefficient is ~1/2 for any roughly balanced gadget.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import f2
from ._bits import mask_bits, parity, parity_u64
from .blocks import BlockLayout
from .cnf import Cnf
from .f2 import EMPTY, AffineSpace, FVec

PM_ONE = "pm_one"
ZERO_ONE = "zero_one"

SPECTRUM_ARITY_CAP = 24
SYNDROME_DIM_CAP = 20


class EmptyPreimageError(Exception):
    """A required gadget preimage set is empty (unbalanced gadget)."""


class EmptySupportError(Exception):
    """A conditioned lifted distribution has empty support."""


@dataclass(frozen=True)
class Gadget:
    """A boolean function on b bits given by its full truth table.

    table[v] is the output on the input whose coordinate j equals bit j of v.
    """

    b: int
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != 1 << self.b:
            raise ValueError("table length must be 2^b")
        if any(t not in (0, 1) for t in self.table):
            raise ValueError("table entries must be bits")

    def eval(self, v: int) -> int:
        return self.table[v]

    def preimage(self, bit: int) -> tuple[int, ...]:
        return tuple(v for v in range(1 << self.b) if self.table[v] == bit)

    def preimage_array(self, bit: int) -> np.ndarray:
        arr = np.frombuffer(bytes(self.table), dtype=np.uint8)
        return np.nonzero(arr == bit)[0].astype(np.uint64)

    def to_text(self) -> str:
        return f"{self.b}\n" + "".join(str(t) for t in self.table) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Gadget":
        lines = text.split()
        b = int(lines[0])
        bits = lines[1]
        return cls(b, tuple(int(ch) for ch in bits))

    def to_file(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_file(cls, path) -> "Gadget":
        with open(path) as fh:
            return cls.from_text(fh.read())


def constant_gadget(b: int, bit: int) -> Gadget:
    return Gadget(b, (bit,) * (1 << b))


def parity_gadget(b: int) -> Gadget:
    return Gadget(b, tuple(parity(v) for v in range(1 << b)))


def ip_gadget(b: int) -> Gadget:
    """Inner product of the low b/2 coordinates with the high b/2 coordinates."""
    if b < 2 or b % 2:
        raise ValueError("inner product needs an even arity >= 2")
    half = b // 2
    lo_mask = mask_bits(half)
    table = tuple(parity((v & lo_mask) & (v >> half)) for v in range(1 << b))
    return Gadget(b, table)


@dataclass(frozen=True)
class Spectrum:
    """Walsh coefficients: coeff(S) = numerators[S] / 2^b, S encoded as a mask."""

    b: int
    convention: str
    numerators: tuple[int, ...]

    @property
    def denominator(self) -> int:
        return 1 << self.b

    def coeff(self, mask: int) -> Fraction:
        return Fraction(self.numerators[mask], self.denominator)

    def max_abs(self) -> Fraction:
        return Fraction(max(abs(v) for v in self.numerators), self.denominator)

    def parseval_holds(self) -> bool:
        return sum(v * v for v in self.numerators) == self.denominator ** 2

    def to_csv(self) -> str:
        lines = ["S_mask,numerator,denominator"]
        den = self.denominator
        for mask, num in enumerate(self.numerators):
            lines.append(f"{mask},{num},{den}")
        return "\n".join(lines) + "\n"


def _fwht_inplace(vals: np.ndarray) -> None:
    h = 1
    size = len(vals)
    while h < size:
        for start in range(0, size, h * 2):
            a = vals[start : start + h].copy()
            b = vals[start + h : start + 2 * h].copy()
            vals[start : start + h] = a + b
            vals[start + h : start + 2 * h] = a - b
        h *= 2


def walsh_spectrum(g: Gadget, convention: str = PM_ONE) -> Spectrum:
    """Exact Walsh transform; coefficients are dyadic with denominator 2^b."""
    if g.b > SPECTRUM_ARITY_CAP:
        raise ValueError(f"arity {g.b} exceeds spectrum cap {SPECTRUM_ARITY_CAP}")
    if convention == PM_ONE:
        vals = np.array([1 - 2 * t for t in g.table], dtype=np.int64)
    elif convention == ZERO_ONE:
        vals = np.array(g.table, dtype=np.int64)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    _fwht_inplace(vals)
    return Spectrum(g.b, convention, tuple(int(v) for v in vals))


def walsh_spectrum_direct(g: Gadget, convention: str = PM_ONE) -> Spectrum:
    """Quadratic-time summation; oracle for the fast transform (b <= 6)."""
    if g.b > 6:
        raise ValueError("direct summation oracle is for b <= 6")
    nums = []
    for mask in range(1 << g.b):
        total = 0
        for v in range(1 << g.b):
            chi = -1 if parity(v & mask) else 1
            if convention == PM_ONE:
                total += (1 - 2 * g.table[v]) * chi
            else:
                total += g.table[v] * chi
        nums.append(total)
    return Spectrum(g.b, convention, tuple(nums))


def max_fourier(g: Gadget) -> Fraction:
    """The infinity norm of the PM_ONE spectrum."""
    return walsh_spectrum(g, PM_ONE).max_abs()


def lift_eval(g: Gadget, layout: BlockLayout, x: FVec) -> FVec:
    """Apply the gadget blockwise: output bit i is g of block i of x."""
    if x.width != layout.width:
        raise ValueError("width mismatch")
    if layout.b != g.b:
        raise ValueError("layout block size differs from gadget arity")
    out = 0
    for i in range(layout.n):
        if g.table[layout.block_value(x.bits, i)]:
            out |= 1 << i
    return FVec(layout.n, out)


def _fixed_entries(layout: BlockLayout, z) -> list[tuple[int, int]]:
    """Normalize a full FVec or a partial {block: bit} mapping."""
    if isinstance(z, FVec):
        if z.width != layout.n:
            raise ValueError("target width must equal the number of blocks")
        return [(i, z.get(i)) for i in range(layout.n)]
    entries = sorted(dict(z).items())
    for i, bit in entries:
        if not 0 <= i < layout.n:
            raise ValueError("block out of range")
        if bit not in (0, 1):
            raise ValueError("target bits must be 0/1")
    return entries


def preimages(g: Gadget, layout: BlockLayout, z) -> Iterator[FVec]:
    """Stream the preimage product set of a full or partial base target.

    For a partial target the vectors range over the fixed blocks only,
    re-indexed in ascending block order; the last fixed block varies fastest.
    """
    entries = _fixed_entries(layout, z)
    per_block = []
    for i, bit in entries:
        pre = g.preimage(bit)
        if not pre:
            raise EmptyPreimageError(f"gadget has no preimage of {bit}")
        per_block.append(pre)
    width = len(entries) * layout.b
    for choice in itertools.product(*per_block):
        bits = 0
        for pos, v in enumerate(choice):
            bits |= v << (pos * layout.b)
        yield FVec(width, bits)


def count_preimages(g: Gadget, layout: BlockLayout, z) -> int:
    entries = _fixed_entries(layout, z)
    total = 1
    for _, bit in entries:
        total *= len(g.preimage(bit))
    return total


def _xor_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    size = len(a)
    out = [0] * size
    for s, av in enumerate(a):
        if not av:
            continue
        for t, bv in enumerate(b):
            if bv:
                out[s ^ t] += av * bv
    return out


def _block_syndrome_table(space: AffineSpace, layout: BlockLayout, i: int, values: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Syndromes of candidate block values against the space equations.

    Returns (syndrome per value, counts per syndrome).  The syndrome of a
    value v is the bit vector of <form_j restricted to block i, v>.
    """
    m = space.codim
    syn = np.zeros(len(values), dtype=np.int64)
    for j, (form, _) in enumerate(space.rows):
        part = (form >> (i * layout.b)) & mask_bits(layout.b)
        if part:
            bits = parity_u64(values & np.uint64(part))
            syn |= bits.astype(np.int64) << j
    counts = np.bincount(syn, minlength=1 << m)
    return syn, [int(c) for c in counts]


def _candidate_values(g: Gadget, layout: BlockLayout, fixed: Mapping[int, int], i: int) -> np.ndarray:
    if i in fixed:
        return g.preimage_array(fixed[i])
    return np.arange(1 << layout.b, dtype=np.uint64)


def count_in_space(space: AffineSpace | f2._EmptySpace, layout: BlockLayout, g: Gadget, z) -> int:
    """Exact |{x : x in space, g(x(i)) = z_i for fixed i}| by per-block counting.

    Works per block: each block contributes a distribution of equation
    syndromes over its candidate values, and the contributions combine by
    XOR-convolution; the answer is the weight of the right-hand-side syndrome.
    """
    if space is EMPTY:
        return 0
    if space.width != layout.width:
        raise ValueError("width mismatch")
    m = space.codim
    if m > SYNDROME_DIM_CAP:
        raise f2.EnumerationCapError(f"syndrome dimension {m} exceeds cap {SYNDROME_DIM_CAP}")
    fixed = dict(_fixed_entries(layout, z))
    rhs = 0
    for j, (_, bit) in enumerate(space.rows):
        rhs |= bit << j
    dist = [0] * (1 << m)
    dist[0] = 1
    for i in range(layout.n):
        values = _candidate_values(g, layout, fixed, i)
        if len(values) == 0:
            return 0
        _, counts = _block_syndrome_table(space, layout, i, values)
        dist = _xor_convolve(dist, counts)
    return dist[rhs]


def sample_in_space(space: AffineSpace, layout: BlockLayout, g: Gadget, z, rng) -> FVec:
    """Uniform sample from {x : x in space, g(x(i)) = z_i for fixed i}.

    Exact sequential sampling: block values are chosen with probability
    proportional to the number of completions, computed from suffix
    XOR-convolutions of the per-block syndrome tables.
    """
    if space.width != layout.width:
        raise ValueError("width mismatch")
    m = space.codim
    fixed = dict(_fixed_entries(layout, z))
    rhs = 0
    for j, (_, bit) in enumerate(space.rows):
        rhs |= bit << j
    per_block = []
    for i in range(layout.n):
        values = _candidate_values(g, layout, fixed, i)
        syn, counts = _block_syndrome_table(space, layout, i, values)
        per_block.append((values, syn, counts))
    suffix = [[0] * (1 << m) for _ in range(layout.n + 1)]
    suffix[layout.n][0] = 1
    for i in range(layout.n - 1, -1, -1):
        suffix[i] = _xor_convolve(per_block[i][2], suffix[i + 1])
    if suffix[0][rhs] == 0:
        raise EmptySupportError("no point matches the space and target")
    bits = 0
    need = rhs
    for i in range(layout.n):
        values, syn, counts = per_block[i]
        weights = [counts[s] * suffix[i + 1][need ^ s] for s in range(1 << m)]
        total = sum(weights)
        pick = rng.randrange(total)
        s = 0
        while pick >= weights[s]:
            pick -= weights[s]
            s += 1
        members = values[syn == s]
        v = int(members[rng.randrange(len(members))])
        bits |= v << (i * layout.b)
        need ^= s
    out = FVec(layout.width, bits)
    assert space.contains(out)
    return out


@dataclass(frozen=True)
class LiftedDistribution:
    """Sample z from an explicit weighted base support, then uniform in G^-1(z)."""

    layout: BlockLayout
    gadget: Gadget
    base: tuple[tuple[int, int], ...]  # (z bits over n, positive integer weight)

    def __post_init__(self):
        if not self.base:
            raise ValueError("base support must be non-empty")
        for z_bits, w in self.base:
            if w <= 0:
                raise ValueError("weights must be positive")
            if not 0 <= z_bits < (1 << self.layout.n):
                raise ValueError("base point out of range")

    @classmethod
    def point_mass(cls, layout: BlockLayout, g: Gadget, z: FVec) -> "LiftedDistribution":
        return cls(layout, g, ((z.bits, 1),))

    @classmethod
    def uniform_on(cls, layout: BlockLayout, g: Gadget, zs: Sequence[FVec]) -> "LiftedDistribution":
        return cls(layout, g, tuple((z.bits, 1) for z in zs))


def sample_lifted(d: LiftedDistribution, conditioning: AffineSpace | None, rng) -> FVec:
    """Exact conditioned sample from the lifted distribution.

    The base point is drawn with weight w(z) * |G^-1(z) ∩ C| / |G^-1(z)|
    (the division keeps the base law intact when fibers differ in size),
    then the lifted point uniformly within the intersection; this equals
    rejection sampling from the lifted distribution conditioned on C.
    """
    import math as _math
    from fractions import Fraction as _Fr

    layout, g = d.layout, d.gadget
    space = conditioning if conditioning is not None else f2.full_space(layout.width)
    weights = []
    for z_bits, w in d.base:
        zv = FVec(layout.n, z_bits)
        fiber = count_preimages(g, layout, zv)
        if fiber == 0:
            raise EmptyPreimageError("base point has an empty fiber")
        cnt = count_in_space(space, layout, g, zv)
        weights.append(_Fr(w * cnt, fiber))
    scale = _math.lcm(*(fr.denominator for fr in weights))
    int_weights = [int(fr * scale) for fr in weights]
    total = sum(int_weights)
    if total == 0:
        raise EmptySupportError("conditioning removes the whole support")
    pick = rng.randrange(total)
    idx = 0
    while pick >= int_weights[idx]:
        pick -= int_weights[idx]
        idx += 1
    z = FVec(layout.n, d.base[idx][0])
    return sample_in_space(space, layout, g, z, rng)


def rejection_sample_lifted(d: LiftedDistribution, conditioning: AffineSpace | None, rng, max_tries: int = 100_000) -> FVec:
    """Oracle sampler: draw from the unconditioned lift, reject outside C."""
    layout, g = d.layout, d.gadget
    totals = list(_accumulate_weights(d))
    grand = totals[-1]
    for _ in range(max_tries):
        pick = rng.randrange(grand)
        idx = 0
        while pick >= totals[idx]:
            idx += 1
        z = FVec(layout.n, d.base[idx][0])
        x = sample_in_space(f2.full_space(layout.width), layout, g, z, rng)
        if conditioning is None or conditioning.contains(x):
            return x
    raise EmptySupportError("rejection sampler exhausted its tries")


def _accumulate_weights(d: LiftedDistribution):
    acc = 0
    for _, w in d.base:
        acc += w
        yield acc


def lift_cnf(phi: Cnf, g: Gadget, width_cap: int = 12) -> Cnf:
    """Substitute the gadget into every clause of the base CNF.

    Each base clause with falsifying pattern alpha on its variable set S turns
    into one clause per choice of per-variable preimages a_i in g^-1(alpha_i);
    the clause forbids x(i) = a_i simultaneously for all i in S.
    """
    b = g.b
    out: list[tuple[int, ...]] = []
    for clause in phi.clauses:
        if len(clause) > width_cap:
            raise ValueError(f"clause width {len(clause)} exceeds cap {width_cap}")
        vars_sorted = sorted(abs(lit) for lit in clause)
        if len(set(vars_sorted)) != len(vars_sorted):
            raise ValueError("clause repeats a variable")
        alpha = {abs(lit): (1 if lit < 0 else 0) for lit in clause}
        per_var = []
        for v in vars_sorted:
            pre = g.preimage(alpha[v])
            if not pre:
                raise EmptyPreimageError(f"gadget has no preimage of {alpha[v]}")
            per_var.append(pre)
        for choice in itertools.product(*per_var):
            lits = []
            for v, a in zip(vars_sorted, choice):
                base = (v - 1) * b
                for j in range(b):
                    var = base + j + 1
                    lits.append(-var if (a >> j) & 1 else var)
            out.append(tuple(lits))
    return Cnf(phi.num_vars * b, tuple(out))
