"""Parity decision trees, the block-completing transform, and the coin game.

Trees may hold lazy children (zero-argument callables resolved on first
visit), so the block-completing transform and adaptive adversaries never
materialize branches that no sampled input reaches.

The coin game charges a tree for shrinking the odd component of the revealed
base assignment: when the revealed blocks split the component and the root
stays in the largest piece, the tree pays the shrinkage in coins; if the root
lands outside the largest piece the tree wins outright; it loses when a due
payment exceeds the remaining budget.
"""
from __future__ import annotations

import math
import random
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import f2
from .blocks import BlockLayout, ClosureAssignment, amortized_closure, closure
from .dtfooling import root_space, sample as dtf_sample
from .f2 import EMPTY, AffineSpace, FVec, full_space, intersect, points_array, reduce_against
from .gadget import Gadget, LiftedDistribution, lift_eval, sample_lifted
from .tseitin import EdgePartialAssignment, Graph, PartialAnalysis, analyze_partial

LIFTED_SUPPORT_CAP = 18
EAGER_TREE_CAP = 1 << 16


@dataclass(frozen=True)
class Leaf:
    tag: str = ""


class Query:
    """A linear-form query node; children may be lazy thunks."""

    __slots__ = ("form", "note", "_kids")

    def __init__(self, form: int, child0, child1, note: str = ""):
        self.form = form
        self.note = note
        self._kids = [child0, child1]

    def child(self, bit: int):
        kid = self._kids[bit]
        if callable(kid):
            kid = kid()
            self._kids[bit] = kid
        return kid


PdtNode = Leaf | Query


@dataclass(frozen=True)
class Pdt:
    width: int
    root: PdtNode


def tree_size(t: Pdt, cap: int = EAGER_TREE_CAP) -> int:
    """Node count; materializes lazy children up to the cap."""
    count = 0
    stack = [t.root]
    while stack:
        node = stack.pop()
        count += 1
        if count > cap:
            raise f2.EnumerationCapError("tree larger than cap")
        if isinstance(node, Query):
            stack.append(node.child(0))
            stack.append(node.child(1))
    return count


def tree_depth(t: Pdt, cap: int = EAGER_TREE_CAP) -> int:
    seen = 0

    def walk(node, d):
        nonlocal seen
        seen += 1
        if seen > cap:
            raise f2.EnumerationCapError("tree larger than cap")
        if isinstance(node, Leaf):
            return d
        return max(walk(node.child(0), d + 1), walk(node.child(1), d + 1))

    return walk(t.root, 0)


def empty_tree(width: int) -> Pdt:
    return Pdt(width, Leaf())


def coordinate_tree(width: int, coords: Sequence[int]) -> Pdt:
    """Queries the given coordinates in order; subtrees are shared."""
    node: PdtNode = Leaf()
    for c in reversed(coords):
        node = Query(1 << c, node, node)
    return Pdt(width, node)


def random_linear_tree(width: int, depth: int, rng: random.Random) -> Pdt:
    """Complete tree of independent uniformly random nonzero forms."""
    if depth > 14:
        raise ValueError("random tree depth capped at 14")

    def build(d: int) -> PdtNode:
        if d == 0:
            return Leaf()
        form = 0
        while form == 0:
            form = rng.getrandbits(width)
        return Query(form, build(d - 1), build(d - 1))

    return Pdt(width, build(depth))


def tree_to_text(t: Pdt, cap: int = EAGER_TREE_CAP) -> str:
    """Preorder listing: `q <form-bits>` for queries, `l` for leaves."""
    from ._bits import bits_to_string

    lines: list[str] = []

    def walk(node):
        if len(lines) > cap:
            raise f2.EnumerationCapError("tree larger than cap")
        if isinstance(node, Leaf):
            lines.append("l")
        else:
            lines.append(f"q {bits_to_string(node.form, t.width)}")
            walk(node.child(0))
            walk(node.child(1))

    walk(t.root)
    return "\n".join(lines) + "\n"


def tree_from_text(width: int, text: str) -> Pdt:
    from ._bits import string_to_bits

    tokens = [line.split() for line in text.splitlines() if line.strip()]
    pos = 0

    def build() -> PdtNode:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of tree file")
        tok = tokens[pos]
        pos += 1
        if tok[0] == "l":
            return Leaf()
        if tok[0] == "q":
            if len(tok[1]) != width:
                raise ValueError("form width mismatch")
            form = string_to_bits(tok[1])
            c0 = build()
            c1 = build()
            return Query(form, c0, c1)
        raise ValueError(f"bad tree line: {' '.join(tok)!r}")

    root = build()
    if pos != len(tokens):
        raise ValueError("trailing tree lines")
    return Pdt(width, root)


def run_pdt(t: Pdt, x: FVec, steps: int | None = None) -> tuple[PdtNode, AffineSpace]:
    """Follow x for the given number of queries (all when steps is None).

    Returns the node reached and the space of inputs answering the same way;
    x is always a member and the codimension is at most the step count.
    """
    if x.width != t.width:
        raise ValueError("width mismatch")
    node = t.root
    space: AffineSpace = full_space(t.width)
    made = 0
    while isinstance(node, Query) and (steps is None or made < steps):
        bit = f2.FVec(t.width, node.form).dot(x)
        nxt = intersect(space, FVec(t.width, node.form), bit)
        assert nxt is not EMPTY
        space = nxt
        node = node.child(bit)
        made += 1
    return node, space


def block_complete(
    t: Pdt,
    layout: BlockLayout,
    a: AffineSpace,
    y: ClosureAssignment,
    p_cap: int | None = None,
) -> Pdt:
    """Insert whole-block coordinate queries before closure-growing queries.

    Whenever the original tree is about to query a form that would add new
    blocks to the closure of the accumulated space, the result first queries
    every coordinate of those blocks (ascending), then the form.  After each
    stage the closure of the accumulated space equals the set of fully
    queried blocks, and the closure growth is bounded by one block per
    original query.
    """
    if a.width != layout.width or t.width != layout.width:
        raise ValueError("width mismatch")
    if layout.b < 2:
        raise ValueError("block completion needs blocks of at least 2 bits")
    start_amortized = len(amortized_closure(a.forms(), layout)[0])
    if p_cap is not None and start_amortized > p_cap:
        raise f2.EnumerationCapError(f"amortized closure {start_amortized} exceeds cap {p_cap}")
    base = f2.space_from_pairs(layout.width, list(a.rows) + y.coordinate_pairs())
    if base is EMPTY:
        raise ValueError("closure assignment is not extendable in the space")
    closed0 = closure(base.forms(), layout)
    if not y.blocks <= closed0:
        raise ValueError("assignment blocks must be closed in the starting space")

    def stage(orig: Query, space: AffineSpace, closed: frozenset[int], stage_idx: int) -> PdtNode:
        new_blocks = sorted(closure(space.forms() + (orig.form,), layout) - closed)
        closed_next = closed | set(new_blocks)
        # |Cl| <= |amortized Cl| <= starting amortized closure + one per query
        if len(closed_next) > start_amortized + stage_idx + 1:
            raise AssertionError("closure grew faster than one block per query")
        coords = [layout.flat(i, j) for i in new_blocks for j in range(layout.b)]

        def fill(pos: int, sp: AffineSpace) -> PdtNode:
            if pos == len(coords):
                return main_query(sp)
            form = 1 << coords[pos]

            def kid(bit: int):
                nxt = f2.space_from_pairs(layout.width, list(sp.rows) + [(form, bit)])
                if nxt is EMPTY:
                    return Leaf("dead")
                return fill(pos + 1, nxt)

            return Query(form, lambda: kid(0), lambda: kid(1), note="block-fill")

        def main_query(sp: AffineSpace) -> PdtNode:
            def kid(bit: int):
                nxt = f2.space_from_pairs(layout.width, list(sp.rows) + [(orig.form, bit)])
                if nxt is EMPTY:
                    return Leaf("dead")
                assert closure(nxt.forms(), layout) == closed_next
                return descend(orig.child(bit), nxt, closed_next, stage_idx + 1)

            return Query(orig.form, lambda: kid(0), lambda: kid(1), note="stage-end")

        return fill(0, space)

    def descend(node: PdtNode, space: AffineSpace, closed: frozenset[int], stage_idx: int) -> PdtNode:
        if isinstance(node, Leaf):
            return node
        return stage(node, space, closed, stage_idx)

    return Pdt(layout.width, descend(t.root, base, closed0, 0))


@dataclass(frozen=True)
class GameStep:
    revealed: tuple[int, ...]  # newly revealed base variables (edges)
    odd_before: int
    odd_after: int
    paid: int
    won: bool


@dataclass(frozen=True)
class GameTranscript:
    budget: Fraction
    steps: tuple[GameStep, ...]
    outcome: str  # WIN | LOSE | EXHAUSTED_QUERIES
    root: int
    initial_odd_size: int
    final_odd_size: int
    final_partial: EdgePartialAssignment | None = None

    @property
    def total_paid(self) -> int:
        return sum(s.paid for s in self.steps)

    def identity_holds(self) -> bool:
        shrink = self.initial_odd_size - self.final_odd_size
        win_shrink = sum(s.odd_before - s.odd_after for s in self.steps if s.won)
        return shrink == self.total_paid + win_shrink


class _Accountant:
    """Tracks the odd component, payments and the game outcome."""

    def __init__(self, graph: Graph, rho: EdgePartialAssignment, root: int, budget: Fraction):
        self.graph = graph
        self.partial = rho
        self.root = root
        self.budget = Fraction(budget)
        self.remaining = Fraction(budget)
        analysis = analyze_partial(graph, rho)
        assert analysis.odd_component is not None and root in analysis.odd_component
        self.odd: frozenset[int] = analysis.odd_component
        self.initial = len(self.odd)
        self.steps: list[GameStep] = []
        self.outcome: str | None = None

    def reveal(self, values: Mapping[int, int]) -> None:
        if self.outcome is not None or not values:
            return
        before = self.odd
        self.partial = self.partial.extend(values)
        analysis = analyze_partial(self.graph, self.partial)
        pieces = [c for c in analysis.components if c <= before]
        after = next(c for c in pieces if self.root in c)
        if after == before:
            self.steps.append(GameStep(tuple(sorted(values)), len(before), len(after), 0, False))
            self.odd = after
            return
        largest = max(pieces, key=lambda c: (len(c), -min(c)))
        if after != largest:
            self.steps.append(GameStep(tuple(sorted(values)), len(before), len(after), 0, True))
            self.odd = after
            self.outcome = "WIN"
            return
        paid = len(before) - len(largest)
        self.steps.append(GameStep(tuple(sorted(values)), len(before), len(after), paid, False))
        self.odd = after
        if paid > self.remaining:
            self.outcome = "LOSE"
        self.remaining -= paid

    def transcript(self) -> GameTranscript:
        return GameTranscript(
            self.budget,
            tuple(self.steps),
            self.outcome or "EXHAUSTED_QUERIES",
            self.root,
            self.initial,
            len(self.odd),
            self.partial,
        )


def lifted_dtfooling_distribution(
    layout: BlockLayout, g: Gadget, rho: EdgePartialAssignment, cap: int = LIFTED_SUPPORT_CAP
) -> LiftedDistribution:
    """The lift of the hard distribution: explicit uniform support over roots.

    The per-root completion spaces are disjoint and equicardinal, so listing
    every completion with weight one is exactly the sampler's base law.
    """
    graph = rho.graph
    if layout.n != graph.num_edges:
        raise ValueError("layout must have one block per edge")
    analysis = analyze_partial(graph, rho)
    if analysis.odd_component is None or not analysis.valid:
        raise ValueError("rho must be valid")
    free = rho.free_edges()
    if len(free) > cap:
        raise f2.EnumerationCapError(f"{len(free)} free edges exceed support cap {cap}")
    fixed_bits = 0
    for k, bit in rho.entries:
        fixed_bits |= bit << k
    support = []
    for v in sorted(analysis.odd_component):
        space, order = root_space(rho, v)
        for pt in points_array(space, cap=cap):
            z = fixed_bits
            for pos, k in enumerate(order):
                if (int(pt) >> pos) & 1:
                    z |= 1 << k
            support.append((z, 1))
    return LiftedDistribution(layout, g, tuple(support))


def exact_lifted_root_law(
    layout: BlockLayout,
    g: Gadget,
    rho: EdgePartialAssignment,
    conditioning: AffineSpace | None = None,
    cap: int = LIFTED_SUPPORT_CAP,
) -> tuple[tuple[int, Fraction], ...]:
    """Exact law of root(G(x)) for x from the lifted hard distribution given x in C.

    Computed per base support point by counting |G^-1(z) ∩ C| / |G^-1(z)|
    with exact integers, so the near-uniformity of the lifted root can be
    checked against the finite-scale spectral budget.
    """
    from .gadget import count_in_space, count_preimages

    graph = rho.graph
    dist = lifted_dtfooling_distribution(layout, g, rho, cap=cap)
    space = conditioning if conditioning is not None else full_space(layout.width)
    weights: dict[int, Fraction] = {}
    for z_bits, w in dist.base:
        z = FVec(layout.n, z_bits)
        from .dtfooling import root_of

        root = root_of(graph, z)
        assert isinstance(root, int)
        fiber = count_preimages(g, layout, z)
        cnt = count_in_space(space, layout, g, z)
        weights[root] = weights.get(root, Fraction(0)) + Fraction(w * cnt, fiber)
    total = sum(weights.values())
    if total == 0:
        raise f2.EmptySpaceError("conditioning removes the whole lifted support")
    return tuple(sorted((v, p / total) for v, p in weights.items()))


def _determined_blocks(basis: list[int], layout: BlockLayout, candidates: Iterable[int]) -> set[int]:
    out = set()
    for i in candidates:
        if all(reduce_against(1 << layout.flat(i, j), basis) == 0 for j in range(layout.b)):
            out.add(i)
    return out


def coin_game(
    tprime: Pdt,
    layout: BlockLayout,
    g: Gadget,
    rho: EdgePartialAssignment,
    sampler: Callable[[random.Random], FVec],
    budget: Fraction,
    rng: random.Random,
    max_steps: int | None = None,
) -> GameTranscript:
    """Play the lifted coin game on one sampled input.

    The sampler draws the lifted point; the tree's queries are answered
    truthfully, and whenever the accumulated equations determine every bit of
    new blocks, those base variables are revealed to the accountant.
    """
    x = sampler(rng)
    z = lift_eval(g, layout, x)
    from .dtfooling import root_of

    root = root_of(rho.graph, z)
    if not isinstance(root, int):
        raise ValueError("sampled assignment does not have a unique root")
    acct = _Accountant(rho.graph, rho, root, budget)
    basis: list[int] = []
    determined: set[int] = set(k for k, _ in rho.entries)
    node = tprime.root
    made = 0
    while isinstance(node, Query) and acct.outcome is None and (max_steps is None or made < max_steps):
        bit = f2.FVec(layout.width, node.form).dot(x)
        reduced = reduce_against(node.form, basis)
        if reduced:
            basis.append(reduced)
            # a new equation can complete blocks it does not even touch
            candidates = set(range(layout.n)) - determined
            newly = _determined_blocks(basis, layout, candidates)
            if newly:
                determined |= newly
                acct.reveal({k: z.get(k) for k in sorted(newly)})
        node = node.child(bit)
        made += 1
    return acct.transcript()


class EdgeQueryStrategy:
    """Adaptive ordinary-decision-tree adversary over edge variables."""

    name = "base"

    def start(self, graph: Graph, rho: EdgePartialAssignment) -> None:  # pragma: no cover
        pass

    def next_edge(self, analysis: PartialAnalysis, revealed: Mapping[int, int], graph: Graph, free: set[int], rng: random.Random) -> int | None:
        raise NotImplementedError


class ScriptedStrategy(EdgeQueryStrategy):
    def __init__(self, edges: Sequence[int], name: str = "scripted"):
        self.edges = list(edges)
        self.name = name
        self._pos = 0

    def start(self, graph, rho):
        self._pos = 0

    def next_edge(self, analysis, revealed, graph, free, rng):
        while self._pos < len(self.edges):
            e = self.edges[self._pos]
            self._pos += 1
            if e in free:
                return e
        return None


class RandomEdgeStrategy(EdgeQueryStrategy):
    name = "random-edge"

    def next_edge(self, analysis, revealed, graph, free, rng):
        if not free:
            return None
        return sorted(free)[rng.randrange(len(free))]


class GreedyCutStrategy(EdgeQueryStrategy):
    """Carves at the cheapest corner of the odd component.

    Repeatedly targets the vertex of the current odd component with the
    fewest free edges and queries those edges, the greedy way to split
    something off with the fewest queries.
    """

    name = "greedy-cut"

    def next_edge(self, analysis, revealed, graph, free, rng):
        odd = analysis.odd_component
        if odd is None or not free:
            return None
        free_deg: dict[int, list[int]] = {v: [] for v in odd}
        for k in free:
            u, w = graph.edges[k]
            if u in odd:
                free_deg[u].append(k)
            if w in odd:
                free_deg[w].append(k)
        candidates = [(len(es), v) for v, es in free_deg.items() if es]
        if not candidates:
            return min(free)
        _, target = min(candidates)
        return min(free_deg[target])


def run_unlifted_game(
    rho: EdgePartialAssignment,
    strategy: EdgeQueryStrategy,
    z: FVec,
    q: int,
    budget: Fraction,
    rng: random.Random,
) -> tuple[GameTranscript, EdgePartialAssignment]:
    """Ordinary decision tree over edges against a sampled base assignment."""
    graph = rho.graph
    from .dtfooling import root_of

    root = root_of(graph, z)
    if not isinstance(root, int):
        raise ValueError("assignment does not have a unique root")
    acct = _Accountant(graph, rho, root, budget)
    strategy.start(graph, rho)
    revealed: dict[int, int] = {}
    free = set(rho.free_edges())
    current = rho
    for _ in range(q):
        if acct.outcome is not None:
            break
        analysis = analyze_partial(graph, current)
        e = strategy.next_edge(analysis, revealed, graph, free, rng)
        if e is None:
            break
        if e not in free:
            raise ValueError(f"strategy queried a fixed edge {e}")
        free.discard(e)
        bit = z.get(e)
        revealed[e] = bit
        current = current.extend({e: bit})
        acct.reveal({e: bit})
    return acct.transcript(), current


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = phat + z * z / (2 * trials)
    spread = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return (center - spread) / denom, (center + spread) / denom


@dataclass(frozen=True)
class TrialRow:
    strategy: str
    trial: int
    root: int
    success: bool
    outcome: str
    paid: int
    identity_ok: bool


@dataclass(frozen=True)
class StrategySummary:
    strategy: str
    trials: int
    successes: int
    wilson_low: float
    wilson_high: float
    all_identities_ok: bool
    max_paid: int


@dataclass(frozen=True)
class ExperimentReport:
    graph_vertices: int
    graph_edges: int
    degree: int
    q: int
    trials: int
    seed: int
    budget: Fraction
    rows: tuple[TrialRow, ...]
    summaries: tuple[StrategySummary, ...]

    def to_csv(self) -> str:
        lines = ["strategy,trial,root,success,outcome,paid,identity_ok"]
        for r in self.rows:
            lines.append(
                f"{r.strategy},{r.trial},{r.root},{int(r.success)},{r.outcome},{r.paid},{int(r.identity_ok)}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"graph: {self.graph_vertices} vertices, {self.graph_edges} edges, degree {self.degree}",
            f"q={self.q} trials={self.trials} seed={self.seed} budget={self.budget}",
        ]
        for s in self.summaries:
            lines.append(
                f"{s.strategy}: success {s.successes}/{s.trials}"
                f" wilson95=[{s.wilson_low:.4f}, {s.wilson_high:.4f}]"
                f" identities_ok={s.all_identities_ok} max_paid={s.max_paid}"
            )
        return "\n".join(lines) + "\n"


def default_strategies() -> dict[str, Callable[[], EdgeQueryStrategy]]:
    return {
        "greedy-cut": GreedyCutStrategy,
        "random-edge": RandomEdgeStrategy,
    }


def lifted_hardness_experiment(
    graph: Graph,
    g: Gadget,
    trees: Mapping[str, Callable[[random.Random], Pdt]],
    trials: int,
    seed: int,
    rho: EdgePartialAssignment | None = None,
    budget: Fraction | None = None,
    p_cap: int | None = None,
    q: int = 0,
) -> ExperimentReport:
    """Coin-game Monte Carlo over parity decision trees on the lifted space.

    Trees are built per trial (so adaptive families can resample forms), run
    through the block-completing transform, and played against exact samples
    of the lifted hard distribution; success means the revealed base partial
    assignment stays valid.  q is only a report label for the family's
    nominal depth.  Desk scale only: the explicit lifted support caps the
    edge count.
    """
    if rho is None:
        rho = EdgePartialAssignment.empty(graph)
    d = graph.degree_if_regular()
    if d is None:
        raise ValueError("lifted experiment expects a regular graph")
    if budget is None:
        budget = Fraction(graph.num_vertices, 50 * d)
    layout = BlockLayout(graph.num_edges, g.b)
    dist = lifted_dtfooling_distribution(layout, g, rho)
    base_space = full_space(layout.width)
    y = ClosureAssignment.from_dict(layout, {})
    rows: list[TrialRow] = []
    summaries: list[StrategySummary] = []
    for name in sorted(trees):
        build = trees[name]
        successes = 0
        identities = True
        max_paid = 0
        for trial in range(trials):
            rng = random.Random((seed << 24) ^ zlib.crc32(name.encode()) ^ trial)
            tree = build(rng)
            tprime = block_complete(tree, layout, base_space, y, p_cap=p_cap)
            transcript = coin_game(
                tprime, layout, g, rho, lambda r: sample_lifted(dist, None, r), budget, rng
            )
            assert transcript.final_partial is not None
            ok = analyze_partial(graph, transcript.final_partial).valid
            successes += ok
            ident = transcript.identity_holds()
            identities &= ident
            max_paid = max(max_paid, transcript.total_paid)
            rows.append(
                TrialRow(name, trial, transcript.root, ok, transcript.outcome, transcript.total_paid, ident)
            )
        low, high = wilson_interval(successes, trials)
        summaries.append(StrategySummary(name, trials, successes, low, high, identities, max_paid))
    return ExperimentReport(
        graph.num_vertices,
        graph.num_edges,
        d,
        q,
        trials,
        seed,
        budget,
        tuple(rows),
        tuple(summaries),
    )


def hardness_experiment(
    graph: Graph,
    q: int,
    trials: int,
    seed: int,
    strategies: Mapping[str, Callable[[], EdgeQueryStrategy]] | None = None,
    rho: EdgePartialAssignment | None = None,
    budget: Fraction | None = None,
) -> ExperimentReport:
    """Monte Carlo estimate of how often q queries keep the assignment valid.

    Per trial: sample the hard distribution, run the adversary for q edge
    queries, record whether the revealed partial assignment is still valid,
    plus the coin-game transcript and its accounting identity.  Per-trial
    seeds split off the master seed in counter mode.
    """
    if strategies is None:
        strategies = default_strategies()
    if rho is None:
        rho = EdgePartialAssignment.empty(graph)
    d = graph.degree_if_regular()
    if d is None:
        raise ValueError("hardness experiment expects a regular graph")
    if budget is None:
        budget = Fraction(graph.num_vertices, 50 * d)
    rows: list[TrialRow] = []
    summaries: list[StrategySummary] = []
    for name in sorted(strategies):
        factory = strategies[name]
        successes = 0
        identities = True
        max_paid = 0
        for trial in range(trials):
            rng = random.Random((seed << 24) ^ zlib.crc32(name.encode()) ^ trial)
            drawn = dtf_sample(rho, rng)
            transcript, final = run_unlifted_game(rho, factory(), drawn.assignment, q, budget, rng)
            ok = analyze_partial(graph, final).valid
            successes += ok
            ident = transcript.identity_holds()
            identities &= ident
            max_paid = max(max_paid, transcript.total_paid)
            rows.append(
                TrialRow(name, trial, drawn.root, ok, transcript.outcome, transcript.total_paid, ident)
            )
        low, high = wilson_interval(successes, trials)
        summaries.append(StrategySummary(name, trials, successes, low, high, identities, max_paid))
    return ExperimentReport(
        graph.num_vertices,
        graph.num_edges,
        d,
        q,
        trials,
        seed,
        budget,
        tuple(rows),
        tuple(summaries),
    )
