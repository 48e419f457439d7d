"""The hard-distribution sampler over edge assignments and its exact root law.

A sample violates the parity constraint of exactly one vertex, the root.  The
root is uniform on the odd component of the source partial assignment; given
the root, the assignment is uniform on the affine space of completions, which
is realized by drawing the non-tree edges of a deterministic BFS spanning
tree uniformly and solving for the tree edges bottom-up.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import f2
from .f2 import AffineSpace, EnumerationCapError, FVec, points_array, space_from_pairs
from .tseitin import EdgePartialAssignment, Graph, analyze_partial, residues

ROOT_LAW_FREE_EDGE_CAP = 22


class InvalidAssignmentError(Exception):
    """The source partial assignment is not valid."""


class InconsistentConditionError(Exception):
    """The conditioning assignment matches no point of the distribution."""


@dataclass(frozen=True)
class Many:
    """More than one violated vertex; returned instead of a root."""

    violated: frozenset[int]


@dataclass(frozen=True)
class RootedSample:
    assignment: FVec  # one bit per edge
    root: int
    source_rho: EdgePartialAssignment


def bfs_tree(g: Graph, edge_subset: Iterable[int], root: int) -> tuple[list[int], dict[int, int]]:
    """Deterministic BFS over the given edges: ascending-neighbor order.

    Returns the visit order and, per non-root visited vertex, its parent edge.
    """
    allowed = set(edge_subset)
    adj: dict[int, list[tuple[int, int]]] = {}
    for k in allowed:
        u, v = g.edges[k]
        adj.setdefault(u, []).append((v, k))
        adj.setdefault(v, []).append((u, k))
    for lst in adj.values():
        lst.sort()
    order = [root]
    parent_edge: dict[int, int] = {}
    seen = {root}
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        for w, k in adj.get(u, ()):
            if w not in seen:
                seen.add(w)
                parent_edge[w] = k
                order.append(w)
    return order, parent_edge


def tree_complete(
    g: Graph,
    component: Iterable[int],
    component_edges: Iterable[int],
    targets: Mapping[int, int],
    root: int,
    nontree: Mapping[int, int],
) -> dict[int, int]:
    """The unique extension of the non-tree values meeting targets off the root.

    The parity of the chosen edges at every vertex u != root equals
    targets[u]; the root's parity comes out as forced by the total parity.
    """
    comp = set(component)
    edges = set(component_edges)
    if root not in comp:
        raise ValueError("root must belong to the component")
    order, parent_edge = bfs_tree(g, edges, root)
    if set(order) != comp:
        raise ValueError("component is not connected by the given edges")
    tree_edges = set(parent_edge.values())
    out = dict(nontree)
    for k in edges - tree_edges:
        if k not in out:
            raise ValueError(f"missing value for non-tree edge {k}")
    for u in reversed(order):
        if u == root:
            continue
        k_parent = parent_edge[u]
        acc = 0
        for k, _ in g.incident(u):
            if k in edges and k != k_parent:
                acc ^= out.get(k, 0)
        out[k_parent] = acc ^ (targets[u] & 1)
    return {k: out[k] for k in edges}


def sample(rho: EdgePartialAssignment, rng: random.Random) -> RootedSample:
    """One draw of the hard distribution for a valid partial assignment."""
    g = rho.graph
    analysis = analyze_partial(g, rho)
    if not analysis.valid:
        raise InvalidAssignmentError("source assignment is not valid")
    odd = analysis.odd_component
    assert odd is not None
    f = analysis.f_rho
    root = sorted(odd)[rng.randrange(len(odd))]
    values = rho.as_dict()
    free = set(rho.free_edges())
    for comp in analysis.components:
        comp_edges = [k for k in free if g.edges[k][0] in comp and g.edges[k][1] in comp]
        if not comp_edges:
            continue
        comp_root = root if comp == odd else min(comp)
        _, parent_edge = bfs_tree(g, comp_edges, comp_root)
        tree_edges = set(parent_edge.values())
        nontree = {k: rng.getrandbits(1) for k in comp_edges if k not in tree_edges}
        targets = {v: f[v] for v in comp}
        values.update(tree_complete(g, comp, comp_edges, targets, comp_root, nontree))
    bits = 0
    for k, bit in values.items():
        bits |= bit << k
    return RootedSample(FVec(g.num_edges, bits), root, rho)


def root_of(g: Graph, z: FVec, charge: Sequence[int] | None = None) -> int | Many:
    """The unique vertex whose parity constraint z violates, or Many."""
    if charge is None:
        charge = (1,) * g.num_vertices
    violated = []
    for v in range(g.num_vertices):
        acc = 0
        for k, _ in g.incident(v):
            acc ^= z.get(k)
        if acc != (charge[v] & 1):
            violated.append(v)
    if len(violated) == 1:
        return violated[0]
    return Many(frozenset(violated))


def root_space(rho: EdgePartialAssignment, v: int) -> tuple[AffineSpace, list[int]]:
    """Completions of rho violating exactly v, over the free-edge coordinates.

    Returns the space together with the free-edge order defining coordinates.
    """
    g = rho.graph
    free = rho.free_edges()
    pos = {k: i for i, k in enumerate(free)}
    f = residues(g, rho.as_dict())
    pairs = []
    for u in range(g.num_vertices):
        form = 0
        for k, _ in g.incident(u):
            if k in pos:
                form |= 1 << pos[k]
        bit = f[u] ^ (1 if u == v else 0)
        pairs.append((form, bit))
    space = space_from_pairs(len(free), pairs)
    if space is f2.EMPTY:
        raise InvalidAssignmentError(f"no completion violates exactly vertex {v}")
    return space, free


@dataclass(frozen=True)
class RootLawReport:
    """Exact conditional law of the root given a sub-assignment of free edges."""

    odd_component: frozenset[int]
    counts: tuple[tuple[int, int], ...]  # (vertex, matching completions)
    law: tuple[tuple[int, Fraction], ...]
    support_ok: bool  # support is exactly the odd component
    uniform_ok: bool  # the law is exactly uniform on it
    equal_counts_ok: bool  # |S_u| = |S_v| across the component

    @property
    def ok(self) -> bool:
        return self.support_ok and self.uniform_ok and self.equal_counts_ok

    def to_csv(self) -> str:
        lines = ["vertex,numerator,denominator"]
        for v, p in self.law:
            lines.append(f"{v},{p.numerator},{p.denominator}")
        return "\n".join(lines) + "\n"


def exact_root_distribution(
    rho: EdgePartialAssignment,
    condition: Mapping[int, int] | None = None,
    cap: int = ROOT_LAW_FREE_EDGE_CAP,
) -> RootLawReport:
    """Exhaustively count the conditional root law and check root hiding.

    The law of root(z), for z drawn by the sampler and conditioned on agreeing
    with the given free-edge sub-assignment, must be uniform on the unique odd
    component of the combined partial assignment.
    """
    g = rho.graph
    analysis = analyze_partial(g, rho)
    if not analysis.valid:
        raise InvalidAssignmentError("source assignment is not valid")
    odd = analysis.odd_component
    assert odd is not None
    free = rho.free_edges()
    if len(free) > cap:
        raise EnumerationCapError(f"{len(free)} free edges exceed cap {cap}")
    condition = dict(condition or {})
    for k in condition:
        if k not in set(free):
            raise ValueError(f"conditioned edge {k} is not free in rho")
    combined = rho.extend(condition)
    comb_analysis = analyze_partial(g, combined)
    if len(comb_analysis.odd_components) != 1:
        raise InconsistentConditionError("condition breaks the single-odd-component structure")
    c1 = comb_analysis.odd_components[0]

    pos = {k: i for i, k in enumerate(free)}
    cmask = np.uint64(sum(1 << pos[k] for k in condition))
    cval = np.uint64(sum(bit << pos[k] for k, bit in condition.items()))
    counts = []
    for v in sorted(odd):
        space, _ = root_space(rho, v)
        pts = points_array(space, cap=cap)
        counts.append((v, int(np.count_nonzero((pts & cmask) == cval))))
    total = sum(c for _, c in counts)
    if total == 0:
        raise InconsistentConditionError("condition matches no sample")
    law = tuple((v, Fraction(c, total)) for v, c in counts)
    support = frozenset(v for v, c in counts if c > 0)
    support_ok = support == c1
    in_c1 = [c for v, c in counts if v in c1]
    equal_counts_ok = len(set(in_c1)) == 1 and all(c == 0 for v, c in counts if v not in c1)
    uniform_ok = all(p == Fraction(1, len(c1)) for v, p in law if v in c1) and support_ok
    return RootLawReport(c1, tuple(counts), law, support_ok, uniform_ok, equal_counts_ok)
