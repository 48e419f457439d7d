import random

import pytest

from resoplus.cnf import Cnf
from resoplus.f2 import EMPTY, FVec, enumerate_points, full_space, space_from_pairs
from resoplus.gadget import ip_gadget, lift_cnf
from resoplus.resproof import (
    LEAF,
    QRY,
    WEAK,
    CheckResult,
    CycleError,
    DanglingNodeError,
    LinearClause,
    ProofDag,
    ProofNode,
    ProofSyntaxError,
    SatisfiableError,
    all_inputs_trace_ok,
    check,
    clause_negation_space,
    metrics,
    parse_text,
    pdt_refute,
    to_text,
    trace,
)
from resoplus.tseitin import complete_graph, cycle_graph, tseitin_cnf

UNIT_PAIR = Cnf(1, ((1,), (-1,)))


def test_linear_clause_negation():
    lc = LinearClause(3, ((0b011, 1), (0b100, 0)))
    neg = lc.negation_space()
    for p in enumerate_points(neg):
        assert not lc.eval(p)
    assert neg.codim == 2


def test_canonical_three_node_proof():
    dag = pdt_refute(UNIT_PAIR)
    assert check(dag, UNIT_PAIR).ok
    assert metrics(dag) == (3, 1)
    t = trace(dag, UNIT_PAIR, FVec(1, 1))
    assert UNIT_PAIR.clauses[t.clause_index] == (-1,)
    t = trace(dag, UNIT_PAIR, FVec(1, 0))
    assert UNIT_PAIR.clauses[t.clause_index] == (1,)


def test_file_round_trip():
    dag = pdt_refute(UNIT_PAIR)
    txt = to_text(dag)
    again = parse_text(txt)
    assert check(again, UNIT_PAIR).ok
    assert to_text(again) == txt


def test_parse_errors():
    with pytest.raises(DanglingNodeError):
        parse_text("rxp 1 1\n0 k=WEAK 7\n")
    with pytest.raises(CycleError):
        parse_text("rxp 1 2\n0 k=WEAK 1\n1 k=WEAK 0\n")
    with pytest.raises(ProofSyntaxError):
        parse_text("rxp 1 1\n0 k=BOGUS 0\n")
    with pytest.raises(ProofSyntaxError):
        parse_text("0 k=LEAF 0\n")  # missing header


def test_check_rejects_swapped_leaf_label():
    dag = pdt_refute(UNIT_PAIR)
    nodes = list(dag.nodes)
    for i, n in enumerate(nodes):
        if n.kind == LEAF:
            nodes[i] = ProofNode(n.node_id, LEAF, n.space, clause=1 - n.clause)
            break
    res = check(ProofDag.build(1, nodes), UNIT_PAIR)
    assert not res.ok and res.rule == "LEAF-FALSIFICATION"


def test_check_rejects_weaken_superset():
    cnf = Cnf(1, ((),))
    nodes = [
        ProofNode(0, WEAK, full_space(1), child=1),
        ProofNode(1, LEAF, space_from_pairs(1, [(1, 1)]), clause=0),
    ]
    res = check(ProofDag.build(1, nodes), cnf)
    assert not res.ok and res.rule == "WEAKEN-CONTAINMENT"


def test_check_rejects_bad_root():
    cnf = Cnf(1, ((),))
    nodes = [ProofNode(0, LEAF, space_from_pairs(1, [(1, 0)]), clause=0)]
    res = check(ProofDag.build(1, nodes), cnf)
    assert not res.ok and res.rule == "ROOT-SPACE"


def test_weakening_chain_depth_zero():
    cnf = Cnf(1, ((),))
    nodes = [ProofNode(i, WEAK, full_space(1), child=i + 1) for i in range(5)]
    nodes.append(ProofNode(5, LEAF, full_space(1), clause=0))
    dag = ProofDag.build(1, nodes)
    assert check(dag, cnf).ok
    assert metrics(dag) == (6, 0)


def test_complete_tree_depth():
    cnf = Cnf(2, ((1, 2), (1, -2), (-1, 2), (-1, -2)))
    dag = pdt_refute(cnf)
    assert check(dag, cnf).ok
    assert metrics(dag)[1] == 2


def test_refutations_of_small_corpus():
    tri = tseitin_cnf(cycle_graph(3)).cnf
    k5 = tseitin_cnf(complete_graph(5)).cnf
    lifted_tri = lift_cnf(tri, ip_gadget(2))
    for cnf in (UNIT_PAIR, tri, k5, lifted_tri):
        dag = pdt_refute(cnf)
        assert check(dag, cnf).ok
    assert all_inputs_trace_ok(pdt_refute(tri), tri)
    assert all_inputs_trace_ok(pdt_refute(lifted_tri), lifted_tri)


def test_trace_length_bounded_by_depth():
    tri = tseitin_cnf(cycle_graph(3)).cnf
    dag = pdt_refute(tri)
    _, depth = metrics(dag)
    for bits in range(8):
        assert trace(dag, tri, FVec(3, bits)).path_length <= depth


def test_satisfiable_input_rejected_with_model():
    sat = Cnf(2, ((1, 2),))
    with pytest.raises(SatisfiableError) as exc:
        pdt_refute(sat)
    assert sat.eval_bits(exc.value.model.bits)


def _mutations(dag, cnf, rng):
    """Single-point corruptions that genuinely change the checked semantics."""
    nodes = list(dag.nodes)
    idx = rng.randrange(len(nodes))
    node = nodes[idx]
    kind = rng.choice(["rhs", "child", "label"])
    if kind == "rhs" and node.space is not EMPTY and node.space.rows:
        row_i = rng.randrange(len(node.space.rows))
        rows = list(node.space.rows)
        form, bit = rows[row_i]
        rows[row_i] = (form, bit ^ 1)
        new_space = space_from_pairs(dag.width, rows)
        if new_space == node.space:
            return None
        nodes[idx] = ProofNode(node.node_id, node.kind, new_space, clause=node.clause,
                               child=node.child, form=node.form, child0=node.child0, child1=node.child1)
        return nodes
    if kind == "child" and node.kind == QRY:
        other = rng.choice([n.node_id for n in nodes])
        if other in (node.child0, node.node_id):
            return None
        target = dag.by_id[node.child0]
        if dag.by_id[other].space == target.space:
            return None
        nodes[idx] = ProofNode(node.node_id, QRY, node.space, form=node.form,
                               child0=other, child1=node.child1)
        try:
            ProofDag.build(dag.width, nodes)
        except (CycleError, DanglingNodeError):
            return None
        return nodes
    if kind == "label" and node.kind == LEAF:
        other = rng.randrange(len(cnf.clauses))
        if other == node.clause:
            return None
        # independent oracle: keep only corruptions where some point of the
        # leaf space fails to falsify the new clause
        breaks = any(
            not cnf.clause_falsified_by(other, p.bits) for p in enumerate_points(node.space)
        )
        if not breaks:
            return None
        nodes[idx] = ProofNode(node.node_id, LEAF, node.space, clause=other)
        return nodes
    return None


def test_mutations_always_rejected():
    tri = tseitin_cnf(cycle_graph(3)).cnf
    corpus = [(UNIT_PAIR, pdt_refute(UNIT_PAIR)), (tri, pdt_refute(tri))]
    rng = random.Random(99)
    rejected = 0
    while rejected < 120:
        cnf, dag = corpus[rng.randrange(len(corpus))]
        mutated = _mutations(dag, cnf, rng)
        if mutated is None:
            continue
        res = check(ProofDag.build(dag.width, mutated), cnf)
        assert not res.ok, "a corrupted proof was silently accepted"
        rejected += 1
