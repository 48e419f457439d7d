"""Graphs, expansion metrics, Tseitin CNFs and valid partial edge assignments.

Edge indices double as CNF variable indices (edge k is DIMACS variable k+1).
The charge defaults to all-ones, which makes the system contradictory exactly
when the vertex count is odd.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import cnf as cnf_mod
from .cnf import Cnf

CHEEGER_SWEEP_CAP = 20


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; edges normalized to (min, max) pairs."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError("vertex out of range")
            if u > v:
                raise ValueError("edges must be normalized as (min, max)")
            if (u, v) in seen:
                raise ValueError("duplicate edge")
            seen.add((u, v))

    @classmethod
    def from_pairs(cls, num_vertices: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        return cls(num_vertices, tuple((min(u, v), max(u, v)) for u, v in pairs))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def degree_if_regular(self) -> int | None:
        deg = self.degrees()
        return deg[0] if deg and len(set(deg)) == 1 else None

    def incident(self, v: int) -> list[tuple[int, int]]:
        """(edge index, other endpoint) pairs for edges at v, ascending index."""
        out = []
        for k, (a, b) in enumerate(self.edges):
            if a == v:
                out.append((k, b))
            elif b == v:
                out.append((k, a))
        return out

    def adjacency(self) -> np.ndarray:
        m = np.zeros((self.num_vertices, self.num_vertices), dtype=np.float64)
        for u, v in self.edges:
            m[u, v] = 1.0
            m[v, u] = 1.0
        return m

    def components(self, free_edges: Iterable[int]) -> list[frozenset[int]]:
        """Connected components of (V, given edge subset), sorted by least vertex."""
        parent = list(range(self.num_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in free_edges:
            u, v = self.edges[k]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        groups: dict[int, set[int]] = {}
        for v in range(self.num_vertices):
            groups.setdefault(find(v), set()).add(v)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def to_text(self) -> str:
        lines = [f"v {self.num_vertices}"]
        lines += [f"e {u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        num = None
        pairs = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "v":
                num = int(parts[1])
            elif parts[0] == "e":
                pairs.append((int(parts[1]), int(parts[2])))
            else:
                raise ValueError(f"bad graph line: {line!r}")
        if num is None:
            raise ValueError("missing vertex count line")
        return cls.from_pairs(num, pairs)

    def to_file(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_file(cls, path) -> "Graph":
        with open(path) as fh:
            return cls.from_text(fh.read())


def complete_graph(k: int) -> Graph:
    return Graph(k, tuple((u, v) for u in range(k) for v in range(u + 1, k)))


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph.from_pairs(k, [(i, (i + 1) % k) for i in range(k)])


def random_regular_graph(num_vertices: int, degree: int, seed: int, require_connected: bool = True, max_tries: int = 200) -> Graph:
    """Seed-reproducible d-regular simple graph via the repaired pairing model.

    Leftover stubs from colliding pairs are reshuffled and matched again until
    none remain or no suitable pair exists, in which case the attempt restarts.
    """
    if (num_vertices * degree) % 2:
        raise ValueError("num_vertices * degree must be even")
    if degree >= num_vertices:
        raise ValueError("degree must be below the vertex count")
    rng = random.Random(seed)

    def try_once() -> set[tuple[int, int]] | None:
        pairs: set[tuple[int, int]] = set()
        stubs = [v for v in range(num_vertices) for _ in range(degree)]
        while stubs:
            rng.shuffle(stubs)
            leftover: list[int] = []
            it = iter(stubs)
            for u, v in zip(it, it):
                if u == v or (min(u, v), max(u, v)) in pairs:
                    leftover += [u, v]
                else:
                    pairs.add((min(u, v), max(u, v)))
            if len(leftover) == len(stubs):
                # no progress; give up unless some suitable pair still exists
                suitable = any(
                    a != b and (min(a, b), max(a, b)) not in pairs
                    for i, a in enumerate(leftover)
                    for b in leftover[i + 1 :]
                )
                if not suitable:
                    return None
            stubs = leftover
        return pairs

    for _ in range(max_tries):
        pairs = try_once()
        if pairs is None:
            continue
        g = Graph(num_vertices, tuple(sorted(pairs)))
        if require_connected and len(g.components(range(g.num_edges))) != 1:
            continue
        return g
    raise RuntimeError("failed to generate a random regular graph; try another seed")


@dataclass(frozen=True)
class ExpanderMetrics:
    degree: int
    lambda_norm: float
    cheeger_ok: bool | None  # None when the exhaustive cut sweep was skipped
    worst_cut_ratio: float | None


def expander_metrics(g: Graph, cheeger_cap: int = CHEEGER_SWEEP_CAP) -> ExpanderMetrics:
    """Normalized second adjacency eigenvalue plus the exhaustive Cheeger sweep.

    cheeger_ok asserts every cut (S, V-S) has at least d/5 * min(|S|, |V|-|S|)
    edges; the sweep covers all 2^(|V|-1) cuts and is skipped above the cap.
    """
    d = g.degree_if_regular()
    if d is None:
        raise ValueError("expander metrics require a regular graph")
    eigs = np.linalg.eigvalsh(g.adjacency())
    lam = float(max(abs(eigs[0]), abs(eigs[-2]))) / d if g.num_vertices > 1 else 0.0
    if g.num_vertices > cheeger_cap:
        return ExpanderMetrics(d, lam, None, None)
    nv = g.num_vertices
    masks = np.arange(1, 1 << (nv - 1), dtype=np.uint64)
    cut = np.zeros(len(masks), dtype=np.int64)
    for u, v in g.edges:
        bu = (masks >> np.uint64(u)) & np.uint64(1) if u < nv - 1 else np.zeros(len(masks), dtype=np.uint64)
        bv = (masks >> np.uint64(v)) & np.uint64(1) if v < nv - 1 else np.zeros(len(masks), dtype=np.uint64)
        cut += (bu ^ bv).astype(np.int64)
    sizes = np.bitwise_count(masks).astype(np.int64)
    min_side = np.minimum(sizes, nv - sizes)
    ok = bool(np.all(5 * cut >= d * min_side))
    ratio = float(np.min(cut / np.maximum(min_side, 1)))
    return ExpanderMetrics(d, lam, ok, ratio)


@dataclass(frozen=True)
class TseitinCnf:
    """Per-vertex odd-charge parity constraints expanded into clauses."""

    graph: Graph
    charge: tuple[int, ...]
    cnf: Cnf
    vertex_clause_ranges: tuple[tuple[int, int], ...]


def tseitin_cnf(g: Graph, charge: Sequence[int] | None = None, contradiction: bool = True) -> TseitinCnf:
    """Build the Tseitin CNF; variables are edges, vertex-major clause order.

    Each vertex contributes the 2^(deg-1) clauses forbidding the local edge
    patterns of the wrong parity, enumerated lexicographically over the
    incident edges in ascending edge-index order.
    """
    if charge is None:
        charge = (1,) * g.num_vertices
    charge = tuple(int(c) & 1 for c in charge)
    if len(charge) != g.num_vertices:
        raise ValueError("charge length must equal the vertex count")
    if contradiction and sum(charge) % 2 == 0:
        raise ValueError("contradiction mode needs odd total charge")
    clauses: list[tuple[int, ...]] = []
    ranges = []
    for v in range(g.num_vertices):
        inc = g.incident(v)
        start = len(clauses)
        for pattern in product((0, 1), repeat=len(inc)):
            if sum(pattern) % 2 == charge[v]:
                continue
            clause = tuple(
                (k + 1) if bit == 0 else -(k + 1) for (k, _), bit in zip(inc, pattern)
            )
            clauses.append(clause)
        ranges.append((start, len(clauses)))
    return TseitinCnf(g, charge, Cnf(g.num_edges, tuple(clauses)), tuple(ranges))


def brute_unsat(formula: Cnf | TseitinCnf, cap: int = cnf_mod.SWEEP_CAP) -> bool:
    """Exhaustive unsatisfiability sweep over all assignments."""
    c = formula.cnf if isinstance(formula, TseitinCnf) else formula
    return cnf_mod.find_model(c, cap) is None


def emit_dimacs(formula: Cnf | TseitinCnf, path) -> None:
    c = formula.cnf if isinstance(formula, TseitinCnf) else formula
    c.to_file(path)


@dataclass(frozen=True)
class EdgePartialAssignment:
    """A {0,1,*} assignment to edges, stored as sorted (edge, bit) pairs."""

    graph: Graph
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for k, bit in self.entries:
            if not 0 <= k < self.graph.num_edges:
                raise ValueError("edge index out of range")
            if bit not in (0, 1):
                raise ValueError("fixed values must be bits")
            if k in seen:
                raise ValueError("duplicate edge")
            seen.add(k)
        if tuple(sorted(self.entries)) != self.entries:
            raise ValueError("entries must be sorted by edge index")

    @classmethod
    def empty(cls, g: Graph) -> "EdgePartialAssignment":
        return cls(g, ())

    @classmethod
    def from_dict(cls, g: Graph, values: Mapping[int, int]) -> "EdgePartialAssignment":
        return cls(g, tuple(sorted(values.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def fixed_edges(self) -> frozenset[int]:
        return frozenset(k for k, _ in self.entries)

    def free_edges(self) -> list[int]:
        fixed = self.fixed_edges
        return [k for k in range(self.graph.num_edges) if k not in fixed]

    def extend(self, values: Mapping[int, int]) -> "EdgePartialAssignment":
        merged = self.as_dict()
        for k, bit in values.items():
            if k in merged and merged[k] != bit:
                raise ValueError(f"edge {k} already fixed to {merged[k]}")
            merged[k] = bit
        return EdgePartialAssignment.from_dict(self.graph, merged)

    def unfix(self, edge: int) -> "EdgePartialAssignment":
        values = self.as_dict()
        values.pop(edge)
        return EdgePartialAssignment.from_dict(self.graph, values)

    def to_text(self) -> str:
        return "".join(f"{k} {bit}\n" for k, bit in self.entries)

    @classmethod
    def from_text(cls, g: Graph, text: str) -> "EdgePartialAssignment":
        values = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            k_s, bit_s = line.split()
            values[int(k_s)] = int(bit_s)
        return cls.from_dict(g, values)

    def to_file(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_file(cls, g: Graph, path) -> "EdgePartialAssignment":
        with open(path) as fh:
            return cls.from_text(g, fh.read())


@dataclass(frozen=True)
class PartialAnalysis:
    components: tuple[frozenset[int], ...]
    f_rho: tuple[int, ...]
    odd_components: tuple[frozenset[int], ...]
    valid: bool

    @property
    def odd_component(self) -> frozenset[int] | None:
        return self.odd_components[0] if len(self.odd_components) == 1 else None


def residues(g: Graph, values: Mapping[int, int]) -> list[int]:
    """f(v) = 1 + sum of fixed incident edge values, mod 2."""
    f = [1] * g.num_vertices
    for k, bit in values.items():
        u, v = g.edges[k]
        f[u] ^= bit
        f[v] ^= bit
    return f


def analyze_partial(g: Graph, rho: EdgePartialAssignment) -> PartialAnalysis:
    """Components, parity residues and validity of a partial edge assignment.

    Valid means: exactly one component of the free-edge graph has odd residue
    sum, and that component contains more than half of the vertices.
    """
    values = rho.as_dict()
    f = residues(g, values)
    comps = g.components(rho.free_edges())
    odd = tuple(c for c in comps if sum(f[v] for v in c) % 2 == 1)
    valid = len(odd) == 1 and 2 * len(odd[0]) > g.num_vertices
    return PartialAnalysis(tuple(comps), tuple(f), odd, valid)
