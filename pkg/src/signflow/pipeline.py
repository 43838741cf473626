"""End-to-end construction of (2k+1, k)-flows.

Stages: switch to a signature with the fewest negative edges, check the
hypotheses, make sure R is 6k-edge connected, pack 3k spanning trees in R,
build a balanced circulation f on Q, pick a beta-orientation D of R with
``beta = 2 df`` so that ``f + g`` (g = k on D) has every boundary divisible
by 2k+1, then reverse directed paths from V+ to V- until all boundaries
vanish.  Every stage leaves a record in the certificate; ``replay`` rebuilds
the flow from those records alone and checks each step on the way.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Any

from .analysis import (
    ENUMERATE_CUT_MAX_N,
    classify_unbalance,
    edge_connectivity,
    improving_cut_switch,
    verify_claim1,
)
from .balanced import (
    EXHAUSTIVE_THETA_MAX_N,
    SINK,
    SOURCE,
    BalancedCirculation,
    build_balanced_circulation,
    theta,
    verify_balanced,
)
from .core import NEGATIVE, BiOrientation, Circulation, SignedGraph, boundary, switch, switch_circulation
from .decompose import ClosedWalk, TreePacking, euler_circuit, pack_trees, parity_subgraph_in_tree
from .errors import BalanceError, GraphError, HypothesisError, InvariantViolation, RepairStuckError, StageError
from .oracle import verify_pq_flow
from .orient import DEFAULT_BUDGET, BoundaryTarget, OrientationCertificate, find_beta_orientation, lift_orientation


@dataclass(frozen=True)
class StageRecord:
    """Audit record of one stage.

    ``data`` maps keys to ints, bools, strings, int tuples, or tuples of
    int tuples, which is all the certificate format can hold.
    """

    name: str
    data: dict[str, Any] = field(default_factory=dict, hash=False)

    def __getitem__(self, key: str) -> Any:
        return self.data[key]


@dataclass(frozen=True)
class FlowCertificate:
    flow: Circulation
    k: int
    stages: tuple[StageRecord, ...]
    repair_count: int
    guaranteed: bool = True

    @property
    def p(self) -> int:
        return 2 * self.k + 1

    @property
    def q(self) -> int:
        return self.k

    @property
    def graph(self) -> SignedGraph:
        return self.flow.graph

    def stage(self, name: str) -> StageRecord:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def verify(self) -> None:
        check = verify_pq_flow(self.graph, self.flow, self.p, self.q)
        if not check:
            raise InvariantViolation(f"certificate flow is invalid: {check.violation}")


# --- repair state ----------------------------------------------------------------

@dataclass(frozen=True)
class RepairState:
    """``f`` lives on Q, ``g`` on R; both are circulations of the same graph."""

    graph: SignedGraph
    k: int
    f: Circulation
    g: Circulation
    beta: tuple[int, ...] = ()
    path: tuple[int, ...] = ()
    path_start: int | None = None

    @property
    def modulus(self) -> int:
        return 2 * self.k + 1

    def total(self) -> Circulation:
        return self.f.plus(self.g)

    def boundary(self) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(boundary(self.f), boundary(self.g)))

    @property
    def norm(self) -> int:
        return sum(abs(d) for d in self.boundary())

    @property
    def v_plus(self) -> frozenset[int]:
        return frozenset(x for x, d in enumerate(self.boundary()) if d > 0)

    @property
    def v_minus(self) -> frozenset[int]:
        return frozenset(x for x, d in enumerate(self.boundary()) if d < 0)

    def check(self) -> None:
        M = self.modulus
        bad = [x for x, d in enumerate(self.boundary()) if d % M]
        if bad:
            raise InvariantViolation(f"boundary not divisible by {M} at vertices {bad}")
        for e in self.graph.positive_edges():
            if self.g.values[e] not in (self.k, self.k + 1):
                raise InvariantViolation(f"g({e}) = {self.g.values[e]} is not k or k+1")


def combine(g_signed: SignedGraph, f: BalancedCirculation, k: int, *, budget: int = DEFAULT_BUDGET) -> RepairState:
    """Set ``beta = 2 df (mod 2k+1)``, orient R as a beta-orientation and put k on it.

    Then ``dg = k*beta = 2k*df = -df (mod 2k+1)`` at every vertex.
    """
    M = 2 * k + 1
    fc = f.circulation
    if fc.graph != g_signed:
        raise GraphError("balanced circulation belongs to a different graph")
    beta = tuple((2 * d) % M for d in boundary(fc))
    r, r_ids = g_signed.subgraph(g_signed.positive_edges())
    cert = find_beta_orientation(r, BoundaryTarget(k, beta), budget=budget)
    return _state_from_orientation(g_signed, k, fc, r_ids, cert.orientation, beta)


def _state_from_orientation(g: SignedGraph, k: int, fc: Circulation, r_ids, r_orientation: BiOrientation,
                            beta: tuple[int, ...]) -> RepairState:
    eta = lift_orientation(g, r_ids, r_orientation)
    values = [0] * g.m
    for e in r_ids:
        values[e] = k
    state = RepairState(g, k, fc, Circulation(g, eta, tuple(values)), beta)
    state.check()
    return state


def _out_edges(state: RepairState) -> list[list[tuple[int, int]]]:
    """Per vertex, (edge, head) for each edge of D leaving it, in edge id order."""
    g = state.graph
    eta = state.g.orientation
    out: list[list[tuple[int, int]]] = [[] for _ in range(g.vertex_count)]
    for e in g.positive_edges():
        t, h = eta.tail_head(g, e)
        out[t].append((e, h))
    return out


def reachable_set(state: RepairState) -> frozenset[int]:
    """Vertices with a directed path in D to some vertex of V-."""
    targets = state.v_minus
    if not targets:
        raise GraphError("V- is empty; reachability is undefined")
    into: list[list[int]] = [[] for _ in range(state.graph.vertex_count)]
    for t, lst in enumerate(_out_edges(state)):
        for _, h in lst:
            into[h].append(t)
    seen = set(targets)
    queue = deque(sorted(targets))
    while queue:
        x = queue.popleft()
        for t in into[x]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return frozenset(seen)


def _shortest_path(state: RepairState) -> tuple[int, list[int]] | None:
    """Shortest directed V+ to V- path; among equal lengths the lowest end vertex."""
    plus, minus = state.v_plus, state.v_minus
    out = _out_edges(state)
    prev: dict[int, tuple[int, int] | None] = {y: None for y in sorted(plus)}
    frontier = sorted(plus)
    while frontier:
        hits = sorted(x for x in frontier if x in minus)
        if hits:
            x = hits[0]
            edges = []
            while prev[x] is not None:
                y, e = prev[x]
                edges.append(e)
                x = y
            return x, edges[::-1]
        nxt = []
        for x in frontier:
            for e, h in out[x]:
                if h not in prev:
                    prev[h] = (x, e)
                    nxt.append(h)
        frontier = nxt
    return None


def _apply_path(state: RepairState, start: int, edges: list[int]) -> RepairState:
    g = state.graph
    M = state.modulus
    eta = dict()
    values = list(state.g.values)
    at = start
    for e in edges:
        t, h = state.g.orientation.tail_head(g, e)
        if t != at:
            raise InvariantViolation(f"edge {e} does not leave vertex {at} in D")
        a, b = state.g.orientation.eta[e]
        eta[e] = (-a, -b)
        values[e] = M - values[e]
        at = h
    new_g = Circulation(g, state.g.orientation.replace(eta), tuple(values))
    return RepairState(g, state.k, state.f, new_g, state.beta, tuple(edges), start)


def repair_step(state: RepairState) -> RepairState:
    """Reverse one directed path from V+ to V- and swap k <-> k+1 on it.

    The boundary drops by 2k+1 at the start, rises by 2k+1 at the end and
    is unchanged elsewhere, so the norm falls by exactly 2(2k+1).  When no
    such path exists the reachable set Y is returned inside
    RepairStuckError together with ``Theta(Y)`` and the boundary sum on Y.
    """
    before = state.norm
    if before == 0:
        raise GraphError("norm is already zero; nothing to repair")
    found = _shortest_path(state)
    if found is None:
        y = reachable_set(state)
        th = theta(state.graph, state.f, y, state.k)
        total = sum(state.boundary()[x] for x in y)
        if th >= state.k - 2:
            raise InvariantViolation(
                f"stuck with Theta(Y) = {th} >= k-2 although the boundary sum on Y is {total}")
        raise RepairStuckError(
            f"no directed path from V+ to V-; Theta(Y) = {th} < {state.k - 2}",
            {"Y": y, "theta": th, "boundary_sum": total})
    start, edges = found
    new = _apply_path(state, start, edges)
    if new.norm != before - 2 * state.modulus:
        raise InvariantViolation(f"norm went from {before} to {new.norm}, expected a drop of {2 * state.modulus}")
    new.check()
    return new


# --- the pipeline ------------------------------------------------------------------

def _claim1(h: SignedGraph, k: int, switch_set: frozenset[int]) -> tuple[SignedGraph, frozenset[int], list]:
    """Switch along improving cuts until R is 6k-edge connected (or no cut improves)."""
    extra = []
    while not verify_claim1(h, k) and h.vertex_count <= ENUMERATE_CUT_MAX_N + 4:
        x = improving_cut_switch(h, k)
        if x is None:
            break
        extra.append(tuple(sorted(x)))
        h = switch(h, x)
        switch_set = switch_set ^ x
    return h, switch_set, extra


def construct_flow(g_signed: SignedGraph, k: int, *, force: bool = False, budget: int = DEFAULT_BUDGET,
                   check_balance: bool = True, seed: int = 0) -> FlowCertificate:
    """Build and verify a (2k+1, k)-flow.

    Without ``force`` the input must be (12k-1)-edge connected and
    essentially (2k+1)-unbalanced.  With ``force`` the stages run anyway;
    the result is either a verified certificate marked unguaranteed or a
    StageError naming the stage that broke.  ``seed`` only matters for
    graphs too large for exhaustive switching, where it drives the heuristic.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    g = g_signed
    if g.vertex_count < 2:
        raise GraphError("need at least two vertices")
    stages: list[StageRecord] = []

    rep = classify_unbalance(g, k, seed=seed)
    x_set = rep.achieving_switch
    h = switch(g, x_set)
    stages.append(StageRecord("normalize", {
        "switch": tuple(sorted(x_set)),
        "negatives_before": len(g.negative_edges()),
        "negatives_after": len(h.negative_edges()),
        "certified": rep.certified,
    }))

    lam = edge_connectivity(g)
    essential = rep.is_essentially_unbalanced_2k1
    applies = lam >= 12 * k - 1 and essential
    stages.append(StageRecord("hypotheses", {
        "lambda": lam, "essential": essential, "applies": applies, "forced": force}))
    if not applies and not force:
        raise HypothesisError(
            f"edge connectivity {lam} (need {12 * k - 1}), essentially {2 * k + 1}-unbalanced: "
            f"{'yes' if essential else 'no'}", rep)

    h, x_set, extra = _claim1(h, k, x_set)
    r_lam = edge_connectivity(h, h.positive_edges())
    stages.append(StageRecord("claim1", {
        "r_lambda": r_lam, "extra_switches": tuple(extra), "switch": tuple(sorted(x_set))}))
    if r_lam < 6 * k and not force:
        raise StageError("claim1", f"positive subgraph is only {r_lam}-edge connected", r_lam)

    packing = pack_trees(h, 3 * k, h.positive_edges())
    stages.append(StageRecord("packing", {"trees": tuple(tuple(sorted(t)) for t in packing.trees)}))

    q_ids = h.negative_edges()
    if len(q_ids) % 2 == 1 and len(q_ids) < 2 * k + 1:
        raise BalanceError(f"|Q| = {len(q_ids)} is odd and below {2 * k + 1}", len(q_ids))
    bc = build_balanced_circulation(h, k, packing, check=False)
    bal = verify_balanced(h, bc) if check_balance and h.vertex_count <= EXHAUSTIVE_THETA_MAX_N else None
    if bal is not None and not bal and not force:
        raise BalanceError(f"Theta({sorted(bal.witness)}) = {bal.min_theta} < {k - 2}", bal.witness)
    fc = bc.circulation
    stages.append(StageRecord("balanced", {
        "walk_start": bc.walk.start,
        "walk": tuple(bc.walk.edge_ids()),
        "parity_subgraph": tuple(sorted(bc.parity_subgraph)),
        "sinks": tuple(e for e in q_ids if fc.orientation.is_sink(e)),
        "heavy": tuple(sorted(bc.heavy_edges)),
        "min_theta": "unchecked" if bal is None else bal.min_theta,
    }))

    state = combine(h, bc, k, budget=budget)
    r_ids = h.positive_edges()
    tails = tuple(state.g.orientation.tail_head(h, e)[0] for e in r_ids)
    initial = state.norm
    stages.append(StageRecord("combine", {"beta": state.beta, "tails": tails, "norm": initial}))

    starts, paths, norms = [], [], [initial]
    while state.norm > 0:
        state = repair_step(state)
        starts.append(state.path_start)
        paths.append(state.path)
        norms.append(state.norm)
    M = 2 * k + 1
    if len(paths) > initial // (2 * M):
        raise InvariantViolation(f"{len(paths)} repairs exceed the bound {initial // (2 * M)}")
    stages.append(StageRecord("repair", {"starts": tuple(starts), "paths": tuple(paths), "norms": tuple(norms)}))

    on_h = state.total()
    check = verify_pq_flow(h, on_h, M, k)
    if not check:
        raise InvariantViolation(f"repaired flow is invalid: {check.violation}")
    flow = switch_circulation(on_h, x_set)
    if flow.graph != g:
        raise InvariantViolation("switching back did not restore the input signature")
    cert = FlowCertificate(flow, k, tuple(stages), len(paths), applies)
    cert.verify()
    return cert


# --- replay ---------------------------------------------------------------------------

def replay(g: SignedGraph, k: int, stages: Iterable[StageRecord]) -> Circulation:
    """Rebuild the flow on ``g`` from stage records, checking every step.

    Raises InvariantViolation naming the first record that does not hold.
    """
    recs = {s.name: s for s in stages}
    for name in ("normalize", "claim1", "packing", "balanced", "combine", "repair"):
        if name not in recs:
            raise InvariantViolation(f"stage record {name!r} is missing")
    M = 2 * k + 1
    x_set = frozenset(recs["claim1"]["switch"])
    h = switch(g, x_set)
    if len(switch(g, recs["normalize"]["switch"]).negative_edges()) != recs["normalize"]["negatives_after"]:
        raise InvariantViolation("normalize: negative edge count does not match")

    packing = TreePacking(tuple(frozenset(t) for t in recs["packing"]["trees"]))
    packing.verify(h)
    if len(packing.trees) != 3 * k:
        raise InvariantViolation(f"packing: {len(packing.trees)} trees, expected {3 * k}")
    positive = set(h.positive_edges())
    if not all(t <= positive for t in packing.trees):
        raise InvariantViolation("packing: a tree uses a negative edge")

    b = recs["balanced"]
    q_ids = h.negative_edges()
    support = set(q_ids) | packing.trees[0] | packing.trees[1]
    par = parity_subgraph_in_tree(h, packing.trees[1], support)
    if tuple(sorted(par)) != tuple(b["parity_subgraph"]):
        raise InvariantViolation("balanced: parity subgraph differs")
    walk = euler_circuit(h, support - par)
    if walk.start != b["walk_start"] or tuple(walk.edge_ids()) != tuple(b["walk"]):
        raise InvariantViolation("balanced: walk differs from the Euler circuit")
    ClosedWalk(walk.start, walk.steps).verify(h, support - par)
    neg_order = [e for e in walk.edge_ids() if h.edges[e].sign == NEGATIVE]
    want_sinks = set(neg_order[1::2])
    if want_sinks != set(b["sinks"]):
        raise InvariantViolation("balanced: sink edges do not alternate along the walk")
    heavy = set(b["heavy"])
    if heavy != (set([e for e in neg_order[1::2]][:k]) if len(q_ids) % 2 else set()):
        raise InvariantViolation("balanced: heavy edges are not the first k sinks")
    eta = list(BiOrientation.reference(h).eta)
    values = [0] * h.m
    for e in q_ids:
        eta[e] = SINK if e in want_sinks else SOURCE
        values[e] = k + 1 if e in heavy else k
    fc = Circulation(h, BiOrientation(tuple(eta)), tuple(values))
    if sum(boundary(fc)) != 0:
        raise InvariantViolation("balanced: total boundary of f is not zero")

    c = recs["combine"]
    beta = tuple((2 * d) % M for d in boundary(fc))
    if tuple(c["beta"]) != beta:
        raise InvariantViolation("combine: beta is not 2 df mod 2k+1")
    r, r_ids = h.subgraph(h.positive_edges())
    tails = tuple(c["tails"])
    if len(tails) != len(r_ids):
        raise InvariantViolation("combine: wrong number of tails")
    r_eta = []
    for e, t in zip(r.edges, tails):
        if t not in (e.u, e.v):
            raise InvariantViolation(f"combine: {t} is not an end of edge {r_ids[e.id]}")
        r_eta.append((1, -1) if t == e.u else (-1, 1))
    d = OrientationCertificate(r, BiOrientation(tuple(r_eta)), BoundaryTarget(k, beta))
    if d.failures():
        raise InvariantViolation(f"combine: not a beta-orientation at vertices {d.failures()}")
    state = _state_from_orientation(h, k, fc, r_ids, d.orientation, beta)
    if state.norm != c["norm"]:
        raise InvariantViolation("combine: recorded norm differs")

    rp = recs["repair"]
    starts, paths = tuple(rp["starts"]), tuple(rp["paths"])
    if len(starts) != len(paths):
        raise InvariantViolation("repair: starts and paths differ in length")
    for i, (y, path) in enumerate(zip(starts, paths)):
        if y not in state.v_plus:
            raise InvariantViolation(f"repair {i}: path starts outside V+")
        before, minus = state.norm, state.v_minus
        state = _apply_path(state, y, list(path))
        if _path_end(h, y, path) not in minus:
            raise InvariantViolation(f"repair {i}: path does not end in V-")
        if state.norm != before - 2 * M:
            raise InvariantViolation(f"repair {i}: norm dropped by {before - state.norm}, not {2 * M}")
    if state.norm != 0:
        raise InvariantViolation(f"repair: final norm is {state.norm}")
    return switch_circulation(state.total(), x_set)


def _path_end(h: SignedGraph, start: int, path) -> int:
    at = start
    for e in path:
        at = h.edges[e].other(at)
    return at
