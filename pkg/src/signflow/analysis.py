"""Edge connectivity, frustration minimisation and unbalance classification."""

from __future__ import annotations

from collections import defaultdict, deque
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .core import NEGATIVE, SignedGraph, switch
from .errors import GraphError, ScaleBoundError

EXHAUSTIVE_SWITCH_MAX_N = 24
ENUMERATE_CUT_MAX_N = 16
_CHUNK = 1 << 18


def _pair_weights(g: SignedGraph, edge_ids: Iterable[int] | None = None):
    """Aggregate parallel edges: arrays u, v, positive count, negative count."""
    pos: dict[tuple[int, int], int] = defaultdict(int)
    neg: dict[tuple[int, int], int] = defaultdict(int)
    for e in g._select(edge_ids):
        key = (min(e.u, e.v), max(e.u, e.v))
        if e.sign == NEGATIVE:
            neg[key] += 1
        else:
            pos[key] += 1
    keys = sorted(set(pos) | set(neg))
    u = np.array([a for a, _ in keys], dtype=np.int64)
    v = np.array([b for _, b in keys], dtype=np.int64)
    p = np.array([pos[k] for k in keys], dtype=np.int64)
    q = np.array([neg[k] for k in keys], dtype=np.int64)
    return u, v, p, q


def _mask_chunks(count: int):
    for lo in range(0, count, _CHUNK):
        yield np.arange(lo, min(count, lo + _CHUNK), dtype=np.int64)


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


# --- edge connectivity -------------------------------------------------------

def cut_size(g: SignedGraph, x_set: Iterable[int], edge_ids: Iterable[int] | None = None) -> int:
    return len(g.cut_edges(x_set, edge_ids))


def _min_cut_enumerate(g: SignedGraph, edge_ids) -> tuple[int, frozenset[int]]:
    n = g.vertex_count
    u, v, p, q = _pair_weights(g, edge_ids)
    w = p + q
    best, best_mask = None, 0
    # vertex n-1 stays on the outside; mask 0 is the empty set
    for masks in _mask_chunks(1 << (n - 1)):
        masks = masks[masks > 0]
        if masks.size == 0:
            continue
        cut = np.zeros(masks.size, dtype=np.int64)
        for a, b, wt in zip(u, v, w):
            cut += wt * (((masks >> a) ^ (masks >> b)) & 1)
        i = int(np.argmin(cut))
        if best is None or cut[i] < best:
            best, best_mask = int(cut[i]), int(masks[i])
    return best, mask_to_set(best_mask)


def _max_flow(n: int, cap: dict[int, dict[int, int]], s: int, t: int) -> tuple[int, frozenset[int]]:
    """Edmonds-Karp on a symmetric capacity map; returns value and source side."""
    flow: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    total = 0
    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            x = queue.popleft()
            for y in sorted(cap[x]):
                if y not in parent and cap[x][y] - flow[x][y] > 0:
                    parent[y] = x
                    queue.append(y)
        if t not in parent:
            return total, frozenset(parent)
        bottleneck = None
        y = t
        while parent[y] is not None:
            x = parent[y]
            r = cap[x][y] - flow[x][y]
            bottleneck = r if bottleneck is None else min(bottleneck, r)
            y = x
        y = t
        while parent[y] is not None:
            x = parent[y]
            flow[x][y] += bottleneck
            flow[y][x] -= bottleneck
            y = x
        total += bottleneck


def _min_cut_flow(g: SignedGraph, edge_ids) -> tuple[int, frozenset[int]]:
    cap: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for x in range(g.vertex_count):
        cap[x]
    for e in g._select(edge_ids):
        cap[e.u][e.v] += 1
        cap[e.v][e.u] += 1
    best, side = None, frozenset()
    for t in range(1, g.vertex_count):
        val, s_side = _max_flow(g.vertex_count, cap, 0, t)
        if best is None or val < best:
            best, side = val, s_side
    return best, side


def min_cut(g: SignedGraph, edge_ids: Iterable[int] | None = None, method: str = "auto") -> tuple[int, frozenset[int]]:
    """Global minimum cut of the (sub)multigraph, signs ignored.

    Returns the cut size and one side ``X`` attaining it.  ``method`` is
    ``"enumerate"`` (all bipartitions), ``"flow"`` (s-t max flows from vertex
    0) or ``"auto"``, which enumerates up to 16 vertices.
    """
    if g.vertex_count < 2:
        raise GraphError("edge connectivity needs at least 2 vertices")
    if edge_ids is not None:
        edge_ids = tuple(edge_ids)
    if method == "auto":
        method = "enumerate" if g.vertex_count <= ENUMERATE_CUT_MAX_N else "flow"
    if method == "enumerate":
        if g.vertex_count > 26:
            raise ScaleBoundError("bipartition enumeration limited to 26 vertices")
        return _min_cut_enumerate(g, edge_ids)
    if method == "flow":
        return _min_cut_flow(g, edge_ids)
    raise ValueError(f"unknown method {method!r}")


def edge_connectivity(g: SignedGraph, edge_ids: Iterable[int] | None = None, method: str = "auto") -> int:
    """Minimum number of edges crossing a nonempty proper vertex subset."""
    return min_cut(g, edge_ids, method)[0]


# --- switching classes -----------------------------------------------------

@dataclass(frozen=True)
class UnbalanceReport:
    """Negative-edge statistics over the switching class of a signature.

    ``min_odd_negative_edges`` is the least odd count in the class, or None
    when every member has an even count.  The two predicates need ``k``.
    """

    min_negative_edges: int
    min_odd_negative_edges: int | None
    parity_invariant: bool
    achieving_switch: frozenset[int]
    certified: bool
    k: int | None = None

    @property
    def is_unbalanced_2k1(self) -> bool:
        return self.min_negative_edges >= 2 * self._k() + 1

    @property
    def is_essentially_unbalanced_2k1(self) -> bool:
        odd = self.min_odd_negative_edges
        return odd is None or odd >= 2 * self._k() + 1

    def _k(self) -> int:
        if self.k is None:
            raise ValueError("report was computed without k; use classify_unbalance")
        return self.k


def _class_exhaustive(g: SignedGraph) -> tuple[int, int, int | None, set[int]]:
    n = g.vertex_count
    u, v, p, q = _pair_weights(g)
    base = int(q.sum())
    delta = p - q
    best, best_mask, best_odd = None, 0, None
    parities: set[int] = set()
    free = max(n - 1, 0)
    for masks in _mask_chunks(1 << free):
        counts = np.full(masks.size, base, dtype=np.int64)
        for a, b, d in zip(u, v, delta):
            if d:
                counts += d * (((masks >> a) ^ (masks >> b)) & 1)
        i = int(np.argmin(counts))
        if best is None or counts[i] < best:
            best, best_mask = int(counts[i]), int(masks[i])
        odd = counts[counts % 2 == 1]
        if odd.size:
            parities.add(1)
            lo = int(odd.min())
            best_odd = lo if best_odd is None else min(best_odd, lo)
        if (counts % 2 == 0).any():
            parities.add(0)
    return best, best_mask, best_odd, parities


def _class_heuristic(g: SignedGraph, restarts: int, seed: int | None) -> tuple[int, frozenset[int]]:
    rng = np.random.default_rng(seed)
    n = g.vertex_count
    best, best_set = len(g.negative_edges()), frozenset()
    for r in range(restarts):
        side = np.zeros(n, dtype=bool) if r == 0 else rng.random(n) < 0.5
        while True:
            h = switch(g, np.flatnonzero(side).tolist())
            gain = np.zeros(n, dtype=np.int64)
            for e in h.edges:
                d = 1 if e.sign == NEGATIVE else -1
                gain[e.u] += d
                gain[e.v] += d
            v = int(np.argmax(gain))
            if gain[v] <= 0:
                break
            side[v] = not side[v]
        count = len(h.negative_edges())
        if count < best:
            best, best_set = count, frozenset(np.flatnonzero(side).tolist())
    return best, best_set


def min_negative_switch(
    g: SignedGraph,
    *,
    exhaustive: bool | None = None,
    restarts: int = 32,
    seed: int | None = 0,
    k: int | None = None,
) -> UnbalanceReport:
    """Minimise the number of negative edges over the switching class.

    Exhaustive mode enumerates all ``2**(n-1)`` switch sets that leave the
    last vertex alone and is exact.  Heuristic mode runs steepest descent on
    single-vertex switches from random starts and returns a non-certified
    upper bound; its odd-count statistic is only trusted when degree parity
    makes every class member even.
    """
    n = g.vertex_count
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_SWITCH_MAX_N
    parity_invariant = all(d % 2 == 0 for d in g.degrees())
    if exhaustive:
        if n > EXHAUSTIVE_SWITCH_MAX_N:
            raise ScaleBoundError(
                f"exhaustive switching limited to {EXHAUSTIVE_SWITCH_MAX_N} vertices, got {n}")
        if n == 0:
            return UnbalanceReport(0, None, True, frozenset(), True, k)
        best, mask, best_odd, parities = _class_exhaustive(g)
        return UnbalanceReport(best, best_odd, len(parities) == 1, mask_to_set(mask), True, k)

    best, best_set = _class_heuristic(g, restarts, seed)
    if parity_invariant:
        odd = None if best % 2 == 0 else best
    else:
        # an odd member exists; its least value is unknown, report the bound we have
        odd = best if best % 2 == 1 else best + 1
    return UnbalanceReport(best, odd, parity_invariant, best_set, False, k)


def classify_unbalance(g: SignedGraph, k: int, **kwargs) -> UnbalanceReport:
    if k < 1:
        raise ValueError("k must be a positive integer")
    return min_negative_switch(g, k=k, **kwargs)


def verify_claim1(g: SignedGraph, k: int) -> bool:
    """Is the positive-edge subgraph R (spanning all vertices) 6k-edge connected?"""
    if g.vertex_count < 2:
        return True
    return edge_connectivity(g, g.positive_edges()) >= 6 * k


def improving_cut_switch(g: SignedGraph, k: int) -> frozenset[int] | None:
    """A vertex set X with ``|E_R[X,X']| <= 6k-1`` whose switching removes negatives.

    On a switch-normalised, (12k-1)-edge connected input this must return
    None; any returned set is a counterexample to the normalisation.
    """
    n = g.vertex_count
    if n < 2:
        return None
    if n > ENUMERATE_CUT_MAX_N + 4:
        raise ScaleBoundError("cut enumeration limited to 20 vertices")
    u, v, p, q = _pair_weights(g)
    for masks in _mask_chunks(1 << (n - 1)):
        masks = masks[masks > 0]
        r_cut = np.zeros(masks.size, dtype=np.int64)
        q_cut = np.zeros(masks.size, dtype=np.int64)
        for a, b, pp, qq in zip(u, v, p, q):
            cross = ((masks >> a) ^ (masks >> b)) & 1
            r_cut += pp * cross
            q_cut += qq * cross
        hit = np.flatnonzero((r_cut <= 6 * k - 1) & (q_cut > r_cut))
        if hit.size:
            return mask_to_set(int(masks[hit[0]]))
    return None


def theorem_applies(g: SignedGraph, k: int, **kwargs) -> tuple[bool, int, UnbalanceReport]:
    """Check connectivity >= 12k-1 and essential (2k+1)-unbalance."""
    lam = edge_connectivity(g) if g.vertex_count >= 2 else 0
    report = classify_unbalance(g, k, **kwargs)
    ok = lam >= 12 * k - 1 and report.is_essentially_unbalanced_2k1
    return ok, lam, report
