"""CNF container with DIMACS serialization and exhaustive sweep helpers."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

SWEEP_CAP = 26


class SweepCapError(Exception):
    """Raised when an exhaustive assignment sweep would exceed the cap."""


@dataclass(frozen=True)
class Cnf:
    """Clauses as tuples of nonzero 1-based signed literals."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")

    def eval_bits(self, x: int) -> bool:
        for clause in self.clauses:
            if not any((x >> (abs(l) - 1)) & 1 == (1 if l > 0 else 0) for l in clause):
                return False
        return True

    def clause_falsified_by(self, clause_idx: int, x: int) -> bool:
        clause = self.clauses[clause_idx]
        return all((x >> (abs(l) - 1)) & 1 == (0 if l > 0 else 1) for l in clause)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for clause in self.clauses:
            lines.append(" ".join(str(l) for l in clause) + " 0")
        return "\n".join(lines) + "\n"

    def to_file(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_dimacs())

    @classmethod
    def from_dimacs(cls, text: str) -> "Cnf":
        num_vars = None
        declared = None
        clauses: list[tuple[int, ...]] = []
        current: list[int] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ValueError(f"bad problem line: {line!r}")
                num_vars, declared = int(parts[2]), int(parts[3])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    clauses.append(tuple(current))
                    current = []
                else:
                    current.append(lit)
        if num_vars is None:
            raise ValueError("missing problem line")
        if current:
            raise ValueError("unterminated clause")
        if declared is not None and declared != len(clauses):
            raise ValueError(f"declared {declared} clauses, found {len(clauses)}")
        return cls(num_vars, tuple(clauses))

    @classmethod
    def from_file(cls, path) -> "Cnf":
        with open(path) as fh:
            return cls.from_dimacs(fh.read())


def _clause_masks(cnf: Cnf) -> list[tuple[int, int]]:
    masks = []
    for clause in cnf.clauses:
        pos = 0
        neg = 0
        for l in clause:
            if l > 0:
                pos |= 1 << (l - 1)
            else:
                neg |= 1 << (-l - 1)
        masks.append((pos, neg))
    return masks


def satisfying_chunks(cnf: Cnf, cap: int = SWEEP_CAP, chunk_bits: int = 20) -> Iterator[np.ndarray]:
    """Yield arrays of satisfying assignments, sweeping all 2^num_vars points."""
    if cnf.num_vars > cap:
        raise SweepCapError(f"{cnf.num_vars} variables exceed sweep cap {cap}")
    masks = _clause_masks(cnf)
    total = 1 << cnf.num_vars
    chunk = min(total, 1 << chunk_bits)
    for start in range(0, total, chunk):
        x = np.arange(start, start + chunk, dtype=np.uint64)
        ok = np.ones(len(x), dtype=bool)
        for pos, neg in masks:
            # clause false iff all positive vars are 0 and all negative vars are 1
            false_here = np.ones(len(x), dtype=bool)
            if pos:
                false_here &= (x & np.uint64(pos)) == 0
            if neg:
                false_here &= (x & np.uint64(neg)) == np.uint64(neg)
            ok &= ~false_here
            if not ok.any():
                break
        if ok.any():
            yield x[ok]


def find_model(cnf: Cnf, cap: int = SWEEP_CAP) -> int | None:
    """First satisfying assignment in counter order, or None."""
    for sat in satisfying_chunks(cnf, cap):
        return int(sat[0])
    return None


def count_models(cnf: Cnf, cap: int = SWEEP_CAP) -> int:
    return sum(len(sat) for sat in satisfying_chunks(cnf, cap))
