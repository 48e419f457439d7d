"""Res(oplus) refutations as affine DAGs: parser, checker, metrics, tracing.

Every node carries its own affine space (stored as explicit equations in the
proof file) and the checker verifies the four DAG conditions semantically,
comparing normalized spaces, so any presentation of the same space is
accepted.  Child 0 of a query node is the response-0 branch.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import f2
from ._bits import bits_to_string, string_to_bits
from .cnf import Cnf
from .f2 import EMPTY, AffineSpace, FVec, full_space, intersect, is_subspace, space_from_pairs

LEAF = "LEAF"
WEAK = "WEAK"
QRY = "QRY"

REFUTE_VAR_CAP = 20


class ProofSyntaxError(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DanglingNodeError(Exception):
    pass


class CycleError(Exception):
    pass


class SatisfiableError(Exception):
    """The CNF given to the refutation generator has a model."""

    def __init__(self, model: FVec):
        super().__init__(f"satisfiable; model {model.to_string()}")
        self.model = model


@dataclass(frozen=True)
class ProofNode:
    node_id: int
    kind: str  # LEAF | WEAK | QRY
    space: AffineSpace | f2._EmptySpace
    clause: int | None = None  # LEAF
    child: int | None = None  # WEAK
    form: int | None = None  # QRY
    child0: int | None = None
    child1: int | None = None

    def children(self) -> tuple[int, ...]:
        if self.kind == WEAK:
            return (self.child,)
        if self.kind == QRY:
            return (self.child0, self.child1)
        return ()


@dataclass(frozen=True)
class ProofDag:
    width: int
    nodes: tuple[ProofNode, ...]  # the first node is the root
    by_id: dict[int, ProofNode]

    @classmethod
    def build(cls, width: int, nodes: list[ProofNode]) -> "ProofDag":
        by_id = {}
        for node in nodes:
            if node.node_id in by_id:
                raise ValueError(f"duplicate node id {node.node_id}")
            by_id[node.node_id] = node
        for node in nodes:
            for c in node.children():
                if c not in by_id:
                    raise DanglingNodeError(f"node {node.node_id} references unknown id {c}")
        _check_acyclic(nodes, by_id)
        return cls(width, tuple(nodes), by_id)

    @property
    def root(self) -> ProofNode:
        return self.nodes[0]


def _check_acyclic(nodes: list[ProofNode], by_id: dict[int, ProofNode]) -> None:
    state: dict[int, int] = {}  # 1 = on stack, 2 = done

    def visit(nid: int) -> None:
        stack = [(nid, iter(by_id[nid].children()))]
        state[nid] = 1
        while stack:
            cur, it = stack[-1]
            advanced = False
            for c in it:
                if state.get(c) == 1:
                    raise CycleError(f"cycle through node {c}")
                if c not in state:
                    state[c] = 1
                    stack.append((c, iter(by_id[c].children())))
                    advanced = True
                    break
            if not advanced:
                state[cur] = 2
                stack.pop()

    for node in nodes:
        if node.node_id not in state:
            visit(node.node_id)


@dataclass(frozen=True)
class LinearClause:
    """A disjunction of affine equations; its negation is an affine space."""

    width: int
    disjuncts: tuple[tuple[int, int], ...]  # (form, bit)

    def negation_space(self) -> AffineSpace | f2._EmptySpace:
        return space_from_pairs(self.width, [(f, 1 ^ b) for f, b in self.disjuncts])

    def eval(self, x: FVec) -> bool:
        return any(FVec(self.width, f).dot(x) == b for f, b in self.disjuncts)


def clause_negation_space(width: int, clause: tuple[int, ...]) -> AffineSpace | f2._EmptySpace:
    """Points falsifying an ordinary clause: every literal forced false."""
    pairs = []
    for lit in clause:
        pairs.append((1 << (abs(lit) - 1), 0 if lit > 0 else 1))
    return space_from_pairs(width, pairs)


def parse_text(text: str) -> ProofDag:
    lines = text.splitlines()
    width = None
    declared = None
    nodes: list[ProofNode] = []
    pending: dict | None = None
    pending_eqs: list[tuple[int, int]] = []

    def flush(line_no: int) -> None:
        nonlocal pending, pending_eqs
        if pending is None:
            return
        space = space_from_pairs(width, pending_eqs)
        nodes.append(ProofNode(space=space, **pending))
        pending = None
        pending_eqs = []

    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "rxp":
            if len(parts) != 3:
                raise ProofSyntaxError(line_no, "header must be `rxp <width> <nodes>`")
            width, declared = int(parts[1]), int(parts[2])
            continue
        if width is None:
            raise ProofSyntaxError(line_no, "missing rxp header")
        if parts[0] == "eq":
            if pending is None:
                raise ProofSyntaxError(line_no, "eq line outside a node")
            if len(parts) != 3 or len(parts[1]) != width:
                raise ProofSyntaxError(line_no, "eq needs a width-long form and a bit")
            pending_eqs.append((string_to_bits(parts[1]), int(parts[2]) & 1))
            continue
        flush(line_no)
        try:
            node_id = int(parts[0])
            if len(parts) < 2 or not parts[1].startswith("k="):
                raise ValueError("expected k=<kind>")
            kind = parts[1][2:]
            if kind == LEAF:
                pending = dict(node_id=node_id, kind=LEAF, clause=int(parts[2]))
            elif kind == WEAK:
                pending = dict(node_id=node_id, kind=WEAK, child=int(parts[2]))
            elif kind == QRY:
                if len(parts[2]) != width:
                    raise ValueError("query form width mismatch")
                pending = dict(
                    node_id=node_id,
                    kind=QRY,
                    form=string_to_bits(parts[2]),
                    child0=int(parts[3]),
                    child1=int(parts[4]),
                )
            else:
                raise ValueError(f"unknown node kind {kind!r}")
        except (ValueError, IndexError) as exc:
            raise ProofSyntaxError(line_no, str(exc)) from None
    flush(len(lines))
    if width is None:
        raise ProofSyntaxError(0, "empty proof file")
    if declared is not None and declared != len(nodes):
        raise ProofSyntaxError(0, f"declared {declared} nodes, found {len(nodes)}")
    return ProofDag.build(width, nodes)


def parse(path) -> ProofDag:
    with open(path) as fh:
        return parse_text(fh.read())


def to_text(dag: ProofDag) -> str:
    lines = [f"rxp {dag.width} {len(dag.nodes)}"]
    for node in dag.nodes:
        if node.kind == LEAF:
            lines.append(f"{node.node_id} k=LEAF {node.clause}")
        elif node.kind == WEAK:
            lines.append(f"{node.node_id} k=WEAK {node.child}")
        else:
            lines.append(
                f"{node.node_id} k=QRY {bits_to_string(node.form, dag.width)} {node.child0} {node.child1}"
            )
        if node.space is not EMPTY:
            for form, bit in node.space.rows:
                lines.append(f"eq {bits_to_string(form, dag.width)} {bit}")
        else:
            # any inconsistent pair denotes the empty space
            zero = "0" * dag.width
            lines.append(f"eq {zero} 1")
    return "\n".join(lines) + "\n"


def write(dag: ProofDag, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_text(dag))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    node_id: int | None = None
    rule: str | None = None

    def __str__(self) -> str:
        return "OK" if self.ok else f"violation(node {self.node_id}, {self.rule})"


def check(dag: ProofDag, cnf: Cnf) -> CheckResult:
    """Verify the four affine-DAG conditions against the CNF.

    Violations are reported for the smallest offending node id, after the
    root-space condition.
    """
    if cnf.num_vars != dag.width:
        return CheckResult(False, dag.root.node_id, "WIDTH-MISMATCH")
    if dag.root.space != full_space(dag.width):
        return CheckResult(False, dag.root.node_id, "ROOT-SPACE")
    for node in sorted(dag.nodes, key=lambda n: n.node_id):
        space = node.space
        if node.kind == QRY:
            form = FVec(dag.width, node.form)
            want0 = intersect(space, form, 0) if space is not EMPTY else EMPTY
            want1 = intersect(space, form, 1) if space is not EMPTY else EMPTY
            if dag.by_id[node.child0].space != want0:
                return CheckResult(False, node.node_id, "QUERY-SPLIT-0")
            if dag.by_id[node.child1].space != want1:
                return CheckResult(False, node.node_id, "QUERY-SPLIT-1")
        elif node.kind == WEAK:
            if not is_subspace(space, dag.by_id[node.child].space):
                return CheckResult(False, node.node_id, "WEAKEN-CONTAINMENT")
        else:
            if node.clause is None or not 0 <= node.clause < len(cnf.clauses):
                return CheckResult(False, node.node_id, "LEAF-CLAUSE-RANGE")
            neg = clause_negation_space(dag.width, cnf.clauses[node.clause])
            if not is_subspace(space, neg):
                return CheckResult(False, node.node_id, "LEAF-FALSIFICATION")
    return CheckResult(True)


def metrics(dag: ProofDag) -> tuple[int, int]:
    """(size, depth): node count and the deepest query-weighted root path.

    Query nodes add one to the paths through them; weakening nodes are free.
    Only paths starting at the root count.
    """
    order = _topological(dag)
    best: dict[int, int] = {nid: -1 for nid in dag.by_id}
    best[dag.root.node_id] = 0
    depth = 0
    for nid in order:
        node = dag.by_id[nid]
        here = best[nid]
        if here < 0:
            continue
        cost = 1 if node.kind == QRY else 0
        depth = max(depth, here + cost if node.kind == QRY else here)
        for c in node.children():
            best[c] = max(best[c], here + cost)
    return len(dag.nodes), depth


def _topological(dag: ProofDag) -> list[int]:
    indeg = {nid: 0 for nid in dag.by_id}
    for node in dag.nodes:
        for c in node.children():
            indeg[c] += 1
    stack = [nid for nid, d in indeg.items() if d == 0]
    order = []
    while stack:
        nid = stack.pop()
        order.append(nid)
        for c in dag.by_id[nid].children():
            indeg[c] -= 1
            if indeg[c] == 0:
                stack.append(c)
    return order


@dataclass(frozen=True)
class TraceResult:
    leaf_id: int
    clause_index: int
    path_length: int


def trace(dag: ProofDag, cnf: Cnf, x: FVec) -> TraceResult:
    """Follow the path of x from the root to a leaf whose clause x falsifies."""
    if x.width != dag.width:
        raise ValueError("width mismatch")
    node = dag.root
    length = 0
    while True:
        if node.space is EMPTY or not node.space.contains(x):
            raise AssertionError(f"input left the node space at {node.node_id}")
        if node.kind == LEAF:
            if not cnf.clause_falsified_by(node.clause, x.bits):
                raise AssertionError(f"leaf clause {node.clause} not falsified")
            return TraceResult(node.node_id, node.clause, length)
        if node.kind == WEAK:
            node = dag.by_id[node.child]
            continue
        bit = FVec(dag.width, node.form).dot(x)
        node = dag.by_id[node.child0 if bit == 0 else node.child1]
        length += 1


def pdt_refute(cnf: Cnf, var_cap: int = REFUTE_VAR_CAP) -> ProofDag:
    """Tree-like refutation by coordinate querying with early falsification leaves.

    Queries variables in ascending order; a branch closes as soon as its fixed
    coordinates falsify some clause.  Raises SatisfiableError with a model if
    the CNF has one.
    """
    if cnf.num_vars > var_cap:
        raise f2.EnumerationCapError(f"{cnf.num_vars} variables exceed cap {var_cap}")
    nodes: list[ProofNode] = []
    counter = 0

    def falsified_clause(mask: int, value: int) -> int | None:
        for idx, clause in enumerate(cnf.clauses):
            ok = True
            for lit in clause:
                bit = 1 << (abs(lit) - 1)
                if not (mask & bit):
                    ok = False
                    break
                want = 0 if lit > 0 else 1
                if ((value >> (abs(lit) - 1)) & 1) != want:
                    ok = False
                    break
            if ok:
                return idx
        return None

    def build(level: int, mask: int, value: int) -> int:
        nonlocal counter
        node_id = counter
        counter += 1
        pairs = [(1 << i, (value >> i) & 1) for i in range(level)]
        space = space_from_pairs(cnf.num_vars, pairs)
        clause = falsified_clause(mask, value)
        if clause is not None:
            nodes.append(ProofNode(node_id, LEAF, space, clause=clause))
            return node_id
        if level == cnf.num_vars:
            raise SatisfiableError(FVec(cnf.num_vars, value))
        placeholder = len(nodes)
        nodes.append(None)  # reserve the preorder slot
        bit = 1 << level
        c0 = build(level + 1, mask | bit, value)
        c1 = build(level + 1, mask | bit, value | bit)
        nodes[placeholder] = ProofNode(node_id, QRY, space, form=bit, child0=c0, child1=c1)
        return node_id

    build(0, 0, 0)
    return ProofDag.build(cnf.num_vars, nodes)


def all_inputs_trace_ok(dag: ProofDag, cnf: Cnf, cap: int = 16) -> bool:
    """Exhaustively re-run trace on every input; oracle for small widths."""
    if dag.width > cap:
        raise f2.EnumerationCapError("width too large for exhaustive tracing")
    for bits in range(1 << dag.width):
        trace(dag, cnf, FVec(dag.width, bits))
    return True
