"""Spanning tree packing, parity subgraphs inside a tree, Euler circuits."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .core import SignedGraph
from .errors import GraphError, InvariantViolation, NotEulerianError, PackingInfeasibleError


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def is_spanning_tree(g: SignedGraph, edge_ids: Iterable[int]) -> bool:
    ids = list(edge_ids)
    if len(ids) != max(g.vertex_count - 1, 0) or len(set(ids)) != len(ids):
        return False
    dsu = _DSU(g.vertex_count)
    return all(dsu.union(g.edges[i].u, g.edges[i].v) for i in ids)


def components(n: int, pairs: Iterable[tuple[int, int]]) -> list[frozenset[int]]:
    dsu = _DSU(n)
    for a, b in pairs:
        dsu.union(a, b)
    groups: dict[int, set[int]] = {}
    for x in range(n):
        groups.setdefault(dsu.find(x), set()).add(x)
    return sorted((frozenset(s) for s in groups.values()), key=min)


@dataclass(frozen=True)
class TreePacking:
    trees: tuple[frozenset[int], ...]

    def verify(self, g: SignedGraph) -> None:
        seen: set[int] = set()
        for i, t in enumerate(self.trees):
            if not is_spanning_tree(g, t):
                raise InvariantViolation(f"tree {i} is not a spanning tree")
            if seen & t:
                raise InvariantViolation(f"tree {i} shares edges {sorted(seen & t)} with an earlier tree")
            seen |= t


class _Forests:
    """t forests over a fixed vertex set with path queries."""

    def __init__(self, g: SignedGraph, t: int):
        self.g = g
        self.adj = [dict() for _ in range(t)]  # per forest: vertex -> {edge: neighbour}
        self.owner: dict[int, int] = {}
        self.size = [0] * t

    def path(self, i: int, a: int, b: int) -> list[int] | None:
        """Edge ids on the a-b path in forest i, or None if disconnected."""
        if a == b:
            return []
        adj = self.adj[i]
        prev = {a: None}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for e, y in sorted(adj.get(x, {}).items()):
                if y not in prev:
                    prev[y] = (x, e)
                    if y == b:
                        out = []
                        while prev[y] is not None:
                            y, e2 = prev[y]
                            out.append(e2)
                        return out
                    queue.append(y)
        return None

    def add(self, i: int, e: int) -> None:
        edge = self.g.edges[e]
        self.adj[i].setdefault(edge.u, {})[e] = edge.v
        self.adj[i].setdefault(edge.v, {})[e] = edge.u
        self.owner[e] = i
        self.size[i] += 1

    def remove(self, e: int) -> None:
        i = self.owner.pop(e)
        edge = self.g.edges[e]
        del self.adj[i][edge.u][e]
        del self.adj[i][edge.v][e]
        self.size[i] -= 1


def _augment(forests: _Forests, t: int, sources: list[int]) -> tuple[bool, set[int]]:
    """Breadth-first exchange search of the matroid-union algorithm.

    ``label[y] = (x, i)`` records that y sits in forest i and is pushed out
    if x enters forest i.  Returns whether an augmentation happened and the
    set of labelled edges.
    """
    g = forests.g
    label: dict[int, tuple[int, int] | None] = {s: None for s in sources}
    queue = deque(sources)
    while queue:
        x = queue.popleft()
        ex = g.edges[x]
        for i in range(t):
            if forests.owner.get(x) == i:
                continue
            path = forests.path(i, ex.u, ex.v)
            if path is None:
                cur, target = x, i
                while True:
                    if cur in forests.owner:
                        src = forests.owner[cur]
                        forests.remove(cur)
                    else:
                        src = None
                    forests.add(target, cur)
                    lab = label[cur]
                    if lab is None:
                        break
                    cur, target = lab[0], src
                return True, set(label)
            for y in path:
                if y not in label:
                    label[y] = (x, i)
                    queue.append(y)
    return False, set(label)


def pack_trees(g: SignedGraph, t: int, edge_ids: Iterable[int] | None = None) -> TreePacking:
    """Find ``t`` edge-disjoint spanning trees among the selected edges.

    Incremental matroid union over ``t`` copies of the graphic matroid.  On
    failure the raised error carries a vertex partition crossed by fewer
    than ``t * (parts - 1)`` edges when one is found.
    """
    if t < 1:
        raise ValueError("t must be positive")
    n = g.vertex_count
    ids = sorted(set(range(g.m) if edge_ids is None else edge_ids))
    need = n - 1
    if need <= 0:
        return TreePacking(tuple(frozenset() for _ in range(t)))
    forests = _Forests(g, t)
    unpacked: list[int] = []
    for e in ids:
        if all(s == need for s in forests.size):
            break
        ok, _ = _augment(forests, t, [e])
        if not ok:
            unpacked.append(e)

    if not all(s == need for s in forests.size):
        witness = None
        if unpacked:
            ok, labelled = _augment(forests, t, unpacked)
            if ok:
                raise InvariantViolation("augmenting path found after a failed insertion")
            parts = components(n, ((g.edges[e].u, g.edges[e].v) for e in labelled))
        else:
            parts = [frozenset([x]) for x in range(n)]
        crossing = sum(1 for e in ids if _part_of(parts, g.edges[e].u) != _part_of(parts, g.edges[e].v))
        if crossing < t * (len(parts) - 1):
            witness = parts
        raise PackingInfeasibleError(
            f"only {sum(forests.size)} of {t * need} tree edges packed; "
            f"no {t} edge-disjoint spanning trees",
            witness,
        )

    trees = []
    for i in range(t):
        trees.append(frozenset(e for e, owner in forests.owner.items() if owner == i))
    packing = TreePacking(tuple(trees))
    packing.verify(g)
    return packing


def _part_of(parts: list[frozenset[int]], x: int) -> int:
    for i, p in enumerate(parts):
        if x in p:
            return i
    raise KeyError(x)


def parity_subgraph_in_tree(g: SignedGraph, tree: Iterable[int], edge_ids: Iterable[int] | None = None) -> frozenset[int]:
    """Edges F of ``tree`` with ``d_F(x) = d_H(x) (mod 2)`` for every vertex.

    ``H`` is the subgraph on ``edge_ids`` (all edges by default).  F is the
    unique T-join of the tree for the odd-degree vertices of H, found by
    pushing parity flags from the leaves towards vertex 0.
    """
    tree = frozenset(tree)
    if not is_spanning_tree(g, tree):
        raise GraphError("tree is not a spanning tree of the vertex set")
    odd = [d % 2 == 1 for d in g.degrees(edge_ids)]
    n = g.vertex_count
    if n == 0:
        return frozenset()
    adj: dict[int, list[tuple[int, int]]] = {x: [] for x in range(n)}
    for e in sorted(tree):
        edge = g.edges[e]
        adj[edge.u].append((edge.v, e))
        adj[edge.v].append((edge.u, e))
    parent_edge: dict[int, tuple[int, int] | None] = {0: None}
    order = [0]
    for x in order:
        for y, e in adj[x]:
            if y not in parent_edge:
                parent_edge[y] = (x, e)
                order.append(y)
    chosen = set()
    for x in reversed(order[1:]):
        if odd[x]:
            p, e = parent_edge[x]
            chosen.add(e)
            odd[p] = not odd[p]
    if odd[0]:
        raise InvariantViolation("odd number of odd-degree vertices")
    return frozenset(chosen)


@dataclass(frozen=True)
class ClosedWalk:
    """Edge traversals ``(edge_id, from_vertex, to_vertex)`` returning to ``start``."""

    start: int
    steps: tuple[tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.steps)

    def edge_ids(self) -> list[int]:
        return [e for e, _, _ in self.steps]

    def verify(self, g: SignedGraph, edge_set: Iterable[int]) -> None:
        at = self.start
        for e, a, b in self.steps:
            edge = g.edges[e]
            if a != at or {a, b} != {edge.u, edge.v}:
                raise InvariantViolation(f"walk breaks at edge {e}")
            at = b
        if self.steps and at != self.start:
            raise InvariantViolation("walk is not closed")
        ids = self.edge_ids()
        if len(set(ids)) != len(ids) or set(ids) != set(edge_set):
            raise InvariantViolation("walk does not cover the edge set exactly once")


def euler_circuit(g: SignedGraph, edge_set: Iterable[int]) -> ClosedWalk:
    """Euler circuit of the given edges by cycle splicing (Hierholzer).

    Starts at the lowest incident vertex and always leaves a vertex along
    its lowest unused edge id, so the walk is reproducible.
    """
    edges = sorted(set(edge_set))
    if not edges:
        return ClosedWalk(0, ())
    deg = g.degrees(edges)
    odd = [x for x, d in enumerate(deg) if d % 2]
    if odd:
        raise NotEulerianError(f"odd degree at vertices {odd}", odd)
    touched = [x for x, d in enumerate(deg) if d]
    parts = components(g.vertex_count, ((g.edges[e].u, g.edges[e].v) for e in edges))
    if sum(1 for p in parts if p & set(touched)) > 1:
        raise NotEulerianError("edge set is disconnected", [sorted(p) for p in parts if p & set(touched)])

    adj: dict[int, list[int]] = {x: [] for x in touched}
    for e in edges:
        adj[g.edges[e].u].append(e)
        adj[g.edges[e].v].append(e)
    ptr = {x: 0 for x in touched}
    used: set[int] = set()
    start = touched[0]
    stack: list[tuple[int, tuple[int, int, int] | None]] = [(start, None)]
    out: list[tuple[int, int, int]] = []
    while stack:
        x, step = stack[-1]
        lst = adj[x]
        while ptr[x] < len(lst) and lst[ptr[x]] in used:
            ptr[x] += 1
        if ptr[x] < len(lst):
            e = lst[ptr[x]]
            used.add(e)
            y = g.edges[e].other(x)
            stack.append((y, (e, x, y)))
        else:
            stack.pop()
            if step is not None:
                out.append(step)
    walk = ClosedWalk(start, tuple(reversed(out)))
    walk.verify(g, edges)
    return walk
