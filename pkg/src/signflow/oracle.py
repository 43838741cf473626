"""Brute-force ground truth for small signed graphs.

Nothing here calls the construction code; the verifier recomputes
boundaries with its own loop so that a bug in ``core.boundary`` cannot hide
itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .analysis import min_negative_switch
from .core import BiOrientation, Circulation, SignedGraph, switch
from .errors import ScaleBoundError

MAX_ORACLE_EDGES = 12


@dataclass(frozen=True)
class FlowCheck:
    ok: bool
    violation: str | None = None
    edge: int | None = None
    vertex: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_pq_flow(g: SignedGraph, c: Circulation, p: int, q: int) -> FlowCheck:
    """Is ``c`` a (p, q)-flow of ``g``: exact zero boundary, values in q..p-q?"""
    if q < 1 or p < 2 * q:
        return FlowCheck(False, f"invalid parameters p={p}, q={q} (need p >= 2q >= 2)")
    if c.graph.vertex_count != g.vertex_count or len(c.values) != g.m:
        return FlowCheck(False, "circulation and graph sizes differ")
    for e, ce in zip(g.edges, c.graph.edges):
        if (e.u, e.v, e.sign) != (ce.u, ce.v, ce.sign):
            return FlowCheck(False, f"edge {e.id} differs between circulation and graph", edge=e.id)
    excess = [0] * g.vertex_count
    for e in g.edges:
        a, b = c.orientation.eta[e.id]
        if a * b != -e.sign:
            return FlowCheck(False, f"edge {e.id}: orientation ({a:+d},{b:+d}) invalid for sign {e.sign:+d}", edge=e.id)
        val = c.values[e.id]
        if not q <= val <= p - q:
            return FlowCheck(False, f"edge {e.id}: value {val} outside {q}..{p - q}", edge=e.id)
        excess[e.u] += a * val
        excess[e.v] += b * val
    for x, d in enumerate(excess):
        if d != 0:
            return FlowCheck(False, f"vertex {x}: boundary {d} is not zero", vertex=x)
    return FlowCheck(True)


def _elimination_order(g: SignedGraph) -> list[int]:
    """Edge order that closes vertices early (maximum-cardinality search)."""
    n = g.vertex_count
    if g.m == 0:
        return []
    placed: list[int] = []
    weight = [0] * n
    done = [False] * n
    deg = g.degrees()
    while len(placed) < n:
        x = max((v for v in range(n) if not done[v]), key=lambda v: (weight[v], deg[v], -v))
        done[x] = True
        placed.append(x)
        for e in g.incidence[x]:
            weight[g.edges[e].other(x)] += 1
    pos = {x: i for i, x in enumerate(placed)}
    return sorted(range(g.m), key=lambda e: (max(pos[g.edges[e].u], pos[g.edges[e].v]),
                                             min(pos[g.edges[e].u], pos[g.edges[e].v]), e))


def _reachable_sums(q: int, hi: int, most: int) -> list[list[tuple[int, int]]]:
    """Intervals covering the sums of ``j`` values from +-[q, hi], for j = 0..most.

    ``reach[j]`` is the exact value set: with ``a`` positive and ``j - a``
    negative terms every integer in ``[a*q - (j-a)*hi, a*hi - (j-a)*q]`` is
    attainable, and the negatives of the remaining totals are needed to close
    a vertex.
    """
    reach = [[(0, 0)]]
    for j in range(1, most + 1):
        spans = sorted((a * q - (j - a) * hi, a * hi - (j - a) * q) for a in range(j + 1))
        merged = [list(spans[0])]
        for lo, up in spans[1:]:
            if lo <= merged[-1][1] + 1:
                merged[-1][1] = max(merged[-1][1], up)
            else:
                merged.append([lo, up])
        reach.append([(lo, up) for lo, up in merged])
    return reach


def exists_pq_flow(g: SignedGraph, p: int, q: int, *, max_edges: int = MAX_ORACLE_EDGES) -> tuple[bool, Circulation | None]:
    """Exhaustive search for a (p, q)-flow.

    Every edge takes a signed value ``s`` with ``q <= |s| <= p-q`` against a
    reference orientation (the sign of ``s`` picks the real orientation).
    Edges are assigned in an elimination order and the set of distinct
    vertex-sum vectors is expanded one edge at a time; the last edge at a
    vertex is forced by conservation and partial sums that no remaining
    choice can cancel are dropped.  The first free edge is kept positive
    since negating a flow gives a flow.
    """
    if q < 1 or p < 2 * q:
        raise ValueError(f"need p >= 2q >= 2, got p={p}, q={q}")
    m = g.m
    if m > max_edges:
        raise ScaleBoundError(f"oracle limited to {max_edges} edges, graph has {m}")
    if m == 0:
        return True, Circulation.zero(g)
    n = g.vertex_count
    order = _elimination_order(g)
    remaining = [len(g.incidence[x]) for x in range(n)]
    hi = p - q
    most = max(g.degrees())
    bound = most * hi
    allowed = np.zeros((most + 1, 2 * bound + 1), dtype=bool)
    for j, spans in enumerate(_reachable_sums(q, hi, most)):
        for a, b in spans:
            allowed[j, max(a, -bound) + bound:min(b, bound) + bound + 1] = True
    magnitudes = np.arange(q, hi + 1, dtype=np.int64)
    signed = np.concatenate([magnitudes, -magnitudes])

    states = np.zeros((1, n), dtype=np.int64)
    parents: list[np.ndarray] = []
    picks: list[np.ndarray] = []
    free_seen = False
    for e in order:
        edge = g.edges[e]
        u, v, sg = edge.u, edge.v, edge.sign
        remaining[u] -= 1
        remaining[v] -= 1
        lu, lv = remaining[u], remaining[v]
        if lu == 0:
            idx = np.arange(len(states))
            val = -states[:, u]
        elif lv == 0:
            idx = np.arange(len(states))
            val = sg * states[:, v]
        else:
            vals = signed if free_seen else magnitudes
            free_seen = True
            idx = np.repeat(np.arange(len(states)), len(vals))
            val = np.tile(vals, len(states))
        mag = np.abs(val)
        keep = (mag >= q) & (mag <= hi)
        idx, val = idx[keep], val[keep]
        new = states[idx]
        new[:, u] += val
        new[:, v] -= sg * val
        su, sv = new[:, u], new[:, v]
        ok = (np.abs(su) <= bound) & (np.abs(sv) <= bound)
        ok[ok] &= allowed[lu, su[ok] + bound] & allowed[lv, sv[ok] + bound]
        new, idx, val = new[ok], idx[ok], val[ok]
        if len(new) == 0:
            return False, None
        new, first = np.unique(new, axis=0, return_index=True)
        states = new
        parents.append(idx[first])
        picks.append(val[first])

    if np.any(states):
        raise AssertionError("closed search ended with nonzero vertex sums")
    chosen = [0] * m
    row = 0
    for step in range(m - 1, -1, -1):
        chosen[order[step]] = int(picks[step][row])
        row = int(parents[step][row])
    eta = []
    for e in g.edges:
        d = 1 if chosen[e.id] > 0 else -1
        eta.append((d, -e.sign * d))
    witness = Circulation(g, BiOrientation(tuple(eta)), tuple(abs(s) for s in chosen))
    if not verify_pq_flow(g, witness, p, q):
        raise AssertionError("oracle produced an invalid witness")
    return True, witness


def candidate_ratios(m: int) -> list[Fraction]:
    """All p/q with q <= max(m, 1) and 2q <= p <= 2m+2, ascending."""
    q_max = max(m, 1)
    p_max = 2 * m + 2
    return sorted({Fraction(p, q) for q in range(1, q_max + 1) for p in range(2 * q, p_max + 1)})


@dataclass(frozen=True)
class FlowNumberResult:
    """Exact circular flow number within the recorded search bounds.

    ``phi_c`` and ``phi`` are None for INFINITE.  ``infinite_certified``
    is True when some edge lies in the support of no flow at all (checked
    by exact rank computation), which rules out every nowhere-zero flow.
    """

    phi_c: Fraction | None
    phi: int | None
    witness: Circulation | None
    q_max: int
    p_max: int
    infinite_certified: bool = False
    tested: tuple[tuple[int, int, bool], ...] = field(default=(), repr=False)

    @property
    def is_infinite(self) -> bool:
        return self.phi_c is None


def _rank(rows: list[list[int]]) -> int:
    """Exact rank over the rationals by fraction-free elimination."""
    mat = [list(r) for r in rows if any(r)]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        a = mat[rank][c]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                b = mat[i][c]
                mat[i] = [a * x - b * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def non_flow_edges(g: SignedGraph) -> list[int]:
    """Edges that are zero in every flow (coloops of the incidence matrix).

    A nowhere-zero flow exists exactly when this list is empty.
    """
    cols = []
    for e in g.edges:
        col = [0] * g.vertex_count
        col[e.u] += 1
        col[e.v] += -e.sign
        cols.append(col)
    full = _rank([list(r) for r in zip(*cols)]) if cols else 0
    out = []
    for i in range(g.m):
        rest = cols[:i] + cols[i + 1:]
        if (_rank([list(r) for r in zip(*rest)]) if rest else 0) < full:
            out.append(i)
    return out


def single_negative_obstruction(g: SignedGraph) -> bool:
    """Does some switching-equivalent signature have exactly one negative edge?"""
    if g.m == 0:
        return False
    return min_negative_switch(g).min_odd_negative_edges == 1


def circular_flow_number(g: SignedGraph, *, max_edges: int = MAX_ORACLE_EDGES, strategy: str = "bisect") -> FlowNumberResult:
    """Least r = p/q admitting a (p, q)-flow, over the bounded candidate set.

    The integer flow number phi comes first, scanning p = 2, 3, ... with
    q = 1; since phi - 1 < r <= phi only candidates in that window remain.
    ``strategy="scan"`` tests them in increasing order and stops at the
    first feasible one; ``"bisect"`` binary-searches them, relying on
    feasibility being monotone in p/q.
    """
    m = g.m
    if m > max_edges:
        raise ScaleBoundError(f"oracle limited to {max_edges} edges, graph has {m}")
    p_max = 2 * m + 2
    q_max = max(m, 1)
    tested: list[tuple[int, int, bool]] = []

    def test(r: Fraction) -> tuple[bool, Circulation | None]:
        ok, w = exists_pq_flow(g, r.numerator, r.denominator, max_edges=max_edges)
        tested.append((r.numerator, r.denominator, ok))
        return ok, w

    if non_flow_edges(g):
        return FlowNumberResult(None, None, None, q_max, p_max, True, ())
    phi, witness = None, None
    for p in range(2, p_max + 1):
        ok, w = test(Fraction(p))
        if ok:
            phi, witness = p, w
            break
    if phi is None:
        return FlowNumberResult(None, None, None, q_max, p_max, False, tuple(tested))

    cands = [r for r in candidate_ratios(m) if phi - 1 < r < phi]
    best = Fraction(phi)
    if strategy == "scan":
        for r in cands:
            ok, w = test(r)
            if ok:
                best, witness = r, w
                break
    elif strategy == "bisect":
        cands.append(best)
        lo, hi = 0, len(cands) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            ok, w = test(cands[mid])
            if ok:
                hi, witness = mid, w
            else:
                lo = mid + 1
        best = cands[lo]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return FlowNumberResult(best, phi, witness, q_max, p_max, False, tuple(tested))


def switch_class_flow_numbers(g: SignedGraph, *, max_edges: int = MAX_ORACLE_EDGES, max_vertices: int = 10) -> dict[frozenset[int], Fraction | None]:
    """Circular flow number of every member of the switching class, keyed by switch set."""
    n = g.vertex_count
    if n > max_vertices:
        raise ScaleBoundError(f"class enumeration limited to {max_vertices} vertices")
    seen: dict[tuple[int, ...], Fraction | None] = {}
    out = {}
    for mask in range(1 << max(n - 1, 0)):
        s = frozenset(i for i in range(n) if mask >> i & 1)
        h = switch(g, s)
        if h.signs not in seen:
            seen[h.signs] = circular_flow_number(h, max_edges=max_edges).phi_c
        out[s] = seen[h.signs]
    return out


def switch_class_invariance_check(g: SignedGraph, **kwargs) -> bool:
    values = set(switch_class_flow_numbers(g, **kwargs).values())
    return len(values) == 1
