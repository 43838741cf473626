"""Balanced special circulations on the negative edges.

The circulation f lives on Q (zero on positive edges) with values in
{k, k+1}.  It is *balanced* when the total boundary is zero and

    Theta(X) = k * |E_R[X, X']| + df(X) >= k - 2

for every vertex set X.  The construction packs 3k spanning trees in R,
takes a parity subgraph F of ``Q + T1 + T2`` inside T2, and walks an Euler
circuit of ``Q + T1 + T2 - F`` labelling the negative edges alternately
source and sink.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .analysis import _mask_chunks, _pair_weights, classify_unbalance, mask_to_set, verify_claim1
from .core import NEGATIVE, BiOrientation, Circulation, SignedGraph, boundary
from .decompose import ClosedWalk, TreePacking, euler_circuit, parity_subgraph_in_tree
from .errors import BalanceError, InvariantViolation, ScaleBoundError

EXHAUSTIVE_THETA_MAX_N = 20

SOURCE = (-1, -1)
SINK = (1, 1)


@dataclass(frozen=True)
class BalancedCirculation:
    circulation: Circulation
    k: int
    walk: ClosedWalk
    heavy_edges: frozenset[int]
    parity_subgraph: frozenset[int] = frozenset()
    walk_trees: tuple[int, int] = (0, 1)

    @property
    def graph(self) -> SignedGraph:
        return self.circulation.graph

    def negative_sequence(self) -> list[int]:
        """Negative edge ids in the order the walk meets them."""
        g = self.graph
        return [e for e in self.walk.edge_ids() if g.edges[e].sign == NEGATIVE]

    def labels(self) -> list[str]:
        o = self.circulation.orientation
        return ["sink" if o.is_sink(e) else "source" for e in self.negative_sequence()]


def build_balanced_circulation(g: SignedGraph, k: int, packing: TreePacking, *, check: bool = True) -> BalancedCirculation:
    """Construct a balanced special circulation on Q from a 3k-tree packing of R.

    Walk order decides everything: the i-th negative edge met (1-based) is a
    source edge for odd i and a sink edge for even i; when |Q| is odd the
    first k sink edges in walk order carry k+1, every other edge of Q carries
    k.  With ``check`` the hypotheses (normalised signature, 6k-connected R,
    essential unbalance) are verified first.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    q_ids = g.negative_edges()
    if len(packing.trees) < 3 * k:
        raise BalanceError(f"need {3 * k} trees, packing has {len(packing.trees)}", len(packing.trees))
    positive = set(g.positive_edges())
    for i, t in enumerate(packing.trees):
        if not t <= positive:
            raise BalanceError(f"tree {i} uses negative edges {sorted(t - positive)}", i)
    if len(q_ids) % 2 == 1 and len(q_ids) < 2 * k + 1:
        raise BalanceError(f"|Q|={len(q_ids)} is odd and below {2 * k + 1}", len(q_ids))
    if check:
        rep = classify_unbalance(g, k)
        if len(q_ids) != rep.min_negative_edges:
            raise BalanceError("signature is not switch-normalised", rep)
        if not rep.is_essentially_unbalanced_2k1:
            raise BalanceError(f"not essentially {2 * k + 1}-unbalanced", rep)
        if not verify_claim1(g, k):
            raise BalanceError(f"positive subgraph is not {6 * k}-edge connected")

    t1, t2 = packing.trees[0], packing.trees[1]
    support = set(q_ids) | t1 | t2
    f_par = parity_subgraph_in_tree(g, t2, support)
    walk = euler_circuit(g, support - f_par)

    eta = list(BiOrientation.reference(g).eta)
    values = [0] * g.m
    sinks = []
    i = 0
    for e in walk.edge_ids():
        if g.edges[e].sign != NEGATIVE:
            continue
        i += 1
        if i % 2 == 1:
            eta[e] = SOURCE
        else:
            eta[e] = SINK
            sinks.append(e)
        values[e] = k
    heavy = frozenset(sinks[:k]) if len(q_ids) % 2 == 1 else frozenset()
    for e in heavy:
        values[e] = k + 1
    bc = BalancedCirculation(
        Circulation(g, BiOrientation(tuple(eta)), tuple(values)), k, walk, heavy, f_par)
    if sum(boundary(bc.circulation)) != 0:
        raise InvariantViolation("total boundary of the balanced circulation is not zero")
    return bc


def theta(g: SignedGraph, f: BalancedCirculation | Circulation, x_set: Iterable[int], k: int | None = None) -> int:
    """``k * |E_R[X, X']| + df(X)``."""
    c, k = _unpack(f, k)
    members = g.check_vertices(x_set)
    d = boundary(c)
    return k * len(g.cut_edges(members, g.positive_edges())) + sum(d[x] for x in members)


def _unpack(f, k):
    if isinstance(f, BalancedCirculation):
        return f.circulation, f.k if k is None else k
    if k is None:
        raise ValueError("k is required for a bare circulation")
    return f, k


@dataclass(frozen=True)
class ThetaProfile:
    """Theta(X) for every X, indexed by bitmask (bit x set iff x in X)."""

    values: np.ndarray

    def __getitem__(self, x_set: Iterable[int]) -> int:
        mask = sum(1 << x for x in set(x_set))
        return int(self.values[mask])

    @property
    def minimum(self) -> int:
        return int(self.values.min())

    def argmin(self) -> frozenset[int]:
        return mask_to_set(int(np.argmin(self.values)))


def _theta_masks(g: SignedGraph, d: np.ndarray, k: int, masks: np.ndarray) -> np.ndarray:
    u, v, p, _ = _pair_weights(g)
    out = np.zeros(masks.size, dtype=np.int64)
    for a, b, w in zip(u, v, p):
        if w:
            out += k * w * (((masks >> a) ^ (masks >> b)) & 1)
    for x in range(g.vertex_count):
        if d[x]:
            out += d[x] * ((masks >> x) & 1)
    return out


def theta_profile(g: SignedGraph, f: BalancedCirculation | Circulation, k: int | None = None) -> ThetaProfile:
    c, k = _unpack(f, k)
    if g.vertex_count > EXHAUSTIVE_THETA_MAX_N:
        raise ScaleBoundError(f"exhaustive Theta limited to {EXHAUSTIVE_THETA_MAX_N} vertices")
    d = np.array(boundary(c), dtype=np.int64)
    parts = [_theta_masks(g, d, k, masks) for masks in _mask_chunks(1 << g.vertex_count)]
    return ThetaProfile(np.concatenate(parts))


@dataclass(frozen=True)
class BalanceCheck:
    ok: bool
    witness: frozenset[int] | None
    exhaustive: bool
    min_theta: int | None
    total_boundary: int

    def __bool__(self) -> bool:
        return self.ok


def verify_balanced(g: SignedGraph, f: BalancedCirculation | Circulation, k: int | None = None, *,
                    samples: int = 4096, seed: int = 0) -> BalanceCheck:
    """Check zero total boundary and ``Theta(X) >= k-2`` for every X.

    Exhaustive up to 20 vertices; above that a seeded random sample of
    subsets is checked and the result is flagged non-exhaustive.
    """
    c, k = _unpack(f, k)
    total = sum(boundary(c))
    n = g.vertex_count
    if total != 0:
        return BalanceCheck(False, frozenset(range(n)), True, None, total)
    exhaustive = n <= EXHAUSTIVE_THETA_MAX_N
    best, best_set = None, frozenset()
    if exhaustive:
        d = np.array(boundary(c), dtype=np.int64)
        for masks in _mask_chunks(1 << n):
            vals = _theta_masks(g, d, k, masks)
            i = int(np.argmin(vals))
            if best is None or vals[i] < best:
                best, best_set = int(vals[i]), mask_to_set(int(masks[i]))
    else:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            x_set = frozenset(np.flatnonzero(rng.random(n) < 0.5).tolist())
            val = theta(g, c, x_set, k)
            if best is None or val < best:
                best, best_set = val, x_set
    ok = best >= k - 2
    return BalanceCheck(ok, None if ok else best_set, exhaustive, best, 0)


@dataclass(frozen=True)
class SegmentAccount:
    """Theta(X) split as in the counting argument.

    ``segments`` holds the contribution of each maximal stretch of the walk
    inside X (entering and leaving edge included); ``off_walk`` is the
    contribution of crossing positive edges that the walk does not use.
    """

    segments: tuple[int, ...]
    off_walk: int

    @property
    def walk_total(self) -> int:
        return sum(self.segments)

    @property
    def total(self) -> int:
        return self.walk_total + self.off_walk


def _edge_contribution(g: SignedGraph, bc: BalancedCirculation, e: int, inside: list[bool]) -> int:
    edge = g.edges[e]
    ends = inside[edge.u] + inside[edge.v]
    if edge.sign == NEGATIVE:
        a, _ = bc.circulation.orientation.eta[e]
        return a * ends * bc.circulation.values[e]
    return bc.k if ends == 1 else 0


def segment_account(g: SignedGraph, bc: BalancedCirculation, x_set: Iterable[int]) -> SegmentAccount:
    """Recompute Theta(X) edge by edge along the Euler walk.

    Source edge inside X: -2f; sink inside: +2f; positive inside: 0;
    crossing source: -f; crossing sink: +f; crossing positive: +k.
    """
    members = g.check_vertices(x_set)
    inside = [x in members for x in range(g.vertex_count)]
    steps = bc.walk.steps
    on_walk = set(bc.walk.edge_ids())
    off = sum(bc.k for e in g.positive_edges()
              if e not in on_walk and inside[g.edges[e].u] != inside[g.edges[e].v])
    if not members or not steps:
        return SegmentAccount((), off)
    start = next((i for i, (_, a, _) in enumerate(steps) if not inside[a]), None)
    if start is None:
        return SegmentAccount((sum(_edge_contribution(g, bc, e, inside) for e, _, _ in steps),), off)
    segments = []
    current = None
    for e, a, b in steps[start:] + steps[:start]:
        if not inside[a] and inside[b]:
            current = _edge_contribution(g, bc, e, inside)
        elif inside[a] and not inside[b]:
            segments.append(current + _edge_contribution(g, bc, e, inside))
            current = None
        elif inside[a] and inside[b]:
            current += _edge_contribution(g, bc, e, inside)
    if current is not None:
        raise InvariantViolation("walk ended inside X")
    return SegmentAccount(tuple(segments), off)


def alternation_defects(bc: BalancedCirculation) -> int:
    """Number of cyclically adjacent source pairs in walk order."""
    labels = bc.labels()
    if len(labels) < 2:
        return 0
    return sum(1 for i in range(len(labels)) if labels[i] == "source" == labels[i - 1])
