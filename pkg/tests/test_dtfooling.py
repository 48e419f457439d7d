import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from resoplus.dtfooling import (
    InconsistentConditionError,
    InvalidAssignmentError,
    Many,
    bfs_tree,
    exact_root_distribution,
    root_of,
    root_space,
    sample,
    tree_complete,
)
from resoplus.f2 import FVec, points_array
from resoplus.tseitin import EdgePartialAssignment, Graph, analyze_partial, complete_graph, cycle_graph


def test_sample_roots_uniform_and_single_violation():
    g = complete_graph(5)
    rho = EdgePartialAssignment.empty(g)
    rng = random.Random(42)
    counts = Counter()
    for _ in range(5000):
        s = sample(rho, rng)
        assert root_of(g, s.assignment) == s.root
        counts[s.root] += 1
    # 5000 draws over 5 roots: 1000 +- 130
    assert all(870 <= v <= 1130 for v in counts.values())


def test_sample_requires_valid_rho():
    g = complete_graph(5)
    inc0 = [k for k, _ in g.incident(0)]
    bad = EdgePartialAssignment.from_dict(g, dict.fromkeys(inc0, 0))
    with pytest.raises(InvalidAssignmentError):
        sample(bad, random.Random(0))


def test_sample_roots_restricted_to_odd_component():
    g = complete_graph(5)
    inc0 = [k for k, _ in g.incident(0)]
    vals = dict.fromkeys(inc0, 0)
    vals[inc0[0]] = 1  # vertex 0 satisfied and isolated
    rho = EdgePartialAssignment.from_dict(g, vals)
    odd = analyze_partial(g, rho).odd_component
    assert odd == frozenset({1, 2, 3, 4})
    rng = random.Random(1)
    for _ in range(200):
        s = sample(rho, rng)
        assert s.root in odd
        # fixed edges preserved
        for k, bit in rho.entries:
            assert s.assignment.get(k) == bit


def test_root_of_many():
    g = complete_graph(5)
    r = root_of(g, FVec(10, 0))
    assert isinstance(r, Many) and r.violated == frozenset(range(5))


def test_tree_complete_unique_on_path():
    path = Graph.from_pairs(3, [(0, 1), (1, 2)])
    out = tree_complete(path, [0, 1, 2], [0, 1], {1: 0, 2: 1}, 0, {})
    # edge (1,2) forced to 1 by vertex 2, then edge (0,1) forced by vertex 1
    assert out == {1: 1, 0: 1}
    solutions = [
        (e0, e1)
        for e0 in (0, 1)
        for e1 in (0, 1)
        if (e0 ^ e1) == 0 and e1 == 1
    ]
    assert solutions == [(out[0], out[1])]


def test_tree_complete_nontree_branching():
    tri = cycle_graph(3)
    _, parent = bfs_tree(tri, [0, 1, 2], 0)
    nontree = ({0, 1, 2} - set(parent.values())).pop()
    seen = set()
    for h in (0, 1):
        out = tree_complete(tri, [0, 1, 2], [0, 1, 2], {1: 1, 2: 1}, 0, {nontree: h})
        seen.add(tuple(sorted(out.items())))
        for u in (1, 2):
            acc = 0
            for k, _ in tri.incident(u):
                acc ^= out[k]
            assert acc == 1
    assert len(seen) == 2


def test_tree_complete_single_vertex_and_disconnected():
    single = Graph(1, ())
    assert tree_complete(single, [0], [], {}, 0, {}) == {}
    two = Graph(2, ())
    with pytest.raises(ValueError):
        tree_complete(two, [0, 1], [], {1: 0}, 0, {})


def test_even_components_fully_satisfied():
    g = complete_graph(5)
    inc0 = [k for k, _ in g.incident(0)]
    vals = dict.fromkeys(inc0, 0)
    vals[inc0[0]] = 1
    rho = EdgePartialAssignment.from_dict(g, vals)
    rng = random.Random(5)
    for _ in range(100):
        s = sample(rho, rng)
        # vertex 0 sits in an even singleton component; its constraint holds
        acc = 0
        for k, _ in g.incident(0):
            acc ^= s.assignment.get(k)
        assert acc == 1


def test_assignment_uniform_within_each_root():
    # conditioned on the drawn root, the completion is uniform on the root's
    # space; on a triangle each space has just two points
    tri = cycle_graph(3)
    rho = EdgePartialAssignment.empty(tri)
    rng = random.Random(13)
    per_root = {v: Counter() for v in range(3)}
    for _ in range(3000):
        s = sample(rho, rng)
        per_root[s.root][s.assignment.bits] += 1
    for v, counts in per_root.items():
        space, _ = root_space(rho, v)
        members = {int(p) for p in points_array(space)}
        assert set(counts) == members and len(members) == 2
        a, b = sorted(counts.values())
        total = a + b
        # two-sided binomial band at ~4 sigma
        assert abs(a - total / 2) <= 4 * (total * 0.25) ** 0.5


def test_root_spaces_disjoint_equicardinal():
    g = complete_graph(5)
    rho = EdgePartialAssignment.empty(g)
    point_sets = []
    for v in range(5):
        space, _ = root_space(rho, v)
        point_sets.append(set(map(int, points_array(space))))
    assert {len(s) for s in point_sets} == {64}
    for i in range(5):
        for j in range(i + 1, 5):
            assert not point_sets[i] & point_sets[j]


def test_exact_root_distribution_uniform():
    g = complete_graph(5)
    rho = EdgePartialAssignment.empty(g)
    rep = exact_root_distribution(rho)
    assert rep.ok
    assert all(p == Fraction(1, 5) for _, p in rep.law)
    # conditioning on one edge keeps the law uniform on the odd component
    rep = exact_root_distribution(rho, {0: 1})
    assert rep.ok


def test_exact_root_distribution_on_split():
    g = complete_graph(5)
    inc0 = [k for k, _ in g.incident(0)]
    # condition isolating vertex 0 with an odd residue: root forced there
    rep = exact_root_distribution(EdgePartialAssignment.empty(g), dict.fromkeys(inc0, 0))
    assert rep.odd_component == frozenset({0})
    assert rep.ok
    assert dict(rep.law)[0] == 1


def test_exact_root_distribution_on_even_singleton_split():
    # fixing vertex 0's edges to values satisfying its parity leaves an even
    # singleton plus an odd path; the law stays uniform on the path
    g = cycle_graph(5)
    rho = EdgePartialAssignment.empty(g)
    inc0 = [k for k, _ in g.incident(0)]
    rep = exact_root_distribution(rho, {inc0[0]: 1, inc0[1]: 0})
    assert rep.odd_component == frozenset({1, 2, 3, 4})
    assert rep.ok and dict(rep.law)[0] == 0


def test_exact_root_distribution_inconsistent_condition():
    # isolating two vertices with odd residues leaves three odd components,
    # which no sample can realize
    g = cycle_graph(5)
    rho = EdgePartialAssignment.empty(g)
    cond = {}
    for v in (0, 2):
        for k, _ in g.incident(v):
            cond[k] = 0
    with pytest.raises(InconsistentConditionError):
        exact_root_distribution(rho, cond)


def test_sampler_matches_exact_law_conditionally():
    g = complete_graph(5)
    rho = EdgePartialAssignment.empty(g)
    condition = {0: 1, 3: 0}
    law = dict(exact_root_distribution(rho, condition).law)
    rng = random.Random(11)
    counts = Counter()
    matched = 0
    while matched < 4000:
        s = sample(rho, rng)
        if all(s.assignment.get(k) == bit for k, bit in condition.items()):
            counts[s.root] += 1
            matched += 1
    for v, p in law.items():
        mean = matched * float(p)
        sigma = (matched * float(p) * (1 - float(p))) ** 0.5
        assert abs(counts.get(v, 0) - mean) <= 4 * max(sigma, 1.0)
