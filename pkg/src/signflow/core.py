"""Signed multigraphs, bidirected orientations, circulations and switching.

Orientations are stored as per-endpoint incidence signs ``eta``: for an edge
``e = uv`` the pair ``(eta(e, u), eta(e, v))`` has ``eta(e, x) = +1`` exactly
when ``e`` is in ``E+(x)``, i.e. contributes ``+f(e)`` to the boundary at
``x``.  A positive edge has one +1 and one -1 (tail and head), a negative edge
has two equal entries: ``(+1, +1)`` is a sink edge and ``(-1, -1)`` a source
edge.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from .errors import GraphError

POSITIVE = 1
NEGATIVE = -1


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    sign: int

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise GraphError(f"vertex {x} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class SignedGraph:
    """Undirected loopless multigraph with a sign on every edge.

    Parallel edges are allowed and told apart only by their id; ids are the
    positions in ``edges``.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be non-negative")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise GraphError(f"edge ids must be 0..m-1 without gaps (position {i} has id {e.id})")
            if not (0 <= e.u < self.vertex_count and 0 <= e.v < self.vertex_count):
                raise GraphError(f"edge {i} references a vertex outside 0..{self.vertex_count - 1}")
            if e.u == e.v:
                raise GraphError(f"edge {i} is a loop at vertex {e.u}")
            if e.sign not in (POSITIVE, NEGATIVE):
                raise GraphError(f"edge {i} has sign {e.sign!r}, expected +1 or -1")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> SignedGraph:
        """Build from ``(u, v)`` or ``(u, v, sign)`` tuples; sign defaults to +1."""
        out = []
        for i, e in enumerate(edges):
            if len(e) == 2:
                u, v = e
                s = POSITIVE
            else:
                u, v, s = e
            out.append(Edge(i, int(u), int(v), int(s)))
        return cls(int(vertex_count), tuple(out))

    @property
    def n(self) -> int:
        return self.vertex_count

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def signs(self) -> tuple[int, ...]:
        return tuple(e.sign for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex, in increasing id order."""
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for e in self.edges:
            inc[e.u].append(e.id)
            inc[e.v].append(e.id)
        return tuple(tuple(x) for x in inc)

    def degree(self, x: int, edge_ids: Iterable[int] | None = None) -> int:
        if edge_ids is None:
            return len(self.incidence[x])
        return sum(1 for i in edge_ids if x in (self.edges[i].u, self.edges[i].v))

    def degrees(self, edge_ids: Iterable[int] | None = None) -> list[int]:
        deg = [0] * self.vertex_count
        for e in self._select(edge_ids):
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def negative_edges(self) -> tuple[int, ...]:
        """Edge ids of Q."""
        return tuple(e.id for e in self.edges if e.sign == NEGATIVE)

    def positive_edges(self) -> tuple[int, ...]:
        """Edge ids of R."""
        return tuple(e.id for e in self.edges if e.sign == POSITIVE)

    def subgraph(self, edge_ids: Iterable[int]) -> tuple[SignedGraph, tuple[int, ...]]:
        """Spanning subgraph on the given edges, renumbered densely.

        Returns the subgraph and the map from new edge id to original id.
        """
        ids = tuple(sorted(set(edge_ids)))
        sub = SignedGraph.from_edges(
            self.vertex_count,
            [(self.edges[i].u, self.edges[i].v, self.edges[i].sign) for i in ids],
        )
        return sub, ids

    def with_signs(self, signs: Sequence[int]) -> SignedGraph:
        if len(signs) != self.m:
            raise GraphError("one sign per edge required")
        return SignedGraph(
            self.vertex_count,
            tuple(Edge(e.id, e.u, e.v, int(s)) for e, s in zip(self.edges, signs)),
        )

    def unsigned(self) -> SignedGraph:
        return self.with_signs([POSITIVE] * self.m)

    def cut_edges(self, x_set: Iterable[int], edge_ids: Iterable[int] | None = None) -> list[int]:
        """Ids of the (selected) edges with exactly one end in ``x_set``."""
        inside = self._membership(x_set)
        return [e.id for e in self._select(edge_ids) if inside[e.u] != inside[e.v]]

    def check_vertices(self, x_set: Iterable[int]) -> frozenset[int]:
        s = frozenset(int(x) for x in x_set)
        for x in s:
            if not 0 <= x < self.vertex_count:
                raise GraphError(f"vertex {x} is not in 0..{self.vertex_count - 1}")
        return s

    def _membership(self, x_set: Iterable[int]) -> list[bool]:
        inside = [False] * self.vertex_count
        for x in self.check_vertices(x_set):
            inside[x] = True
        return inside

    def _select(self, edge_ids: Iterable[int] | None) -> Iterable[Edge]:
        if edge_ids is None:
            return self.edges
        return (self.edges[i] for i in edge_ids)


@dataclass(frozen=True)
class BiOrientation:
    """Per-edge incidence signs ``(eta(e, u), eta(e, v))``."""

    eta: tuple[tuple[int, int], ...]

    @classmethod
    def reference(cls, g: SignedGraph) -> BiOrientation:
        """Positive edges oriented u -> v, negative edges as sink edges."""
        return cls(tuple((1, -e.sign) for e in g.edges))

    def check(self, g: SignedGraph) -> None:
        if len(self.eta) != g.m:
            raise GraphError(f"orientation has {len(self.eta)} entries, graph has {g.m} edges")
        for e, (a, b) in zip(g.edges, self.eta):
            if a not in (1, -1) or b not in (1, -1):
                raise GraphError(f"edge {e.id}: incidence signs must be +1 or -1")
            if a * b != -e.sign:
                kind = "positive" if e.sign == POSITIVE else "negative"
                raise GraphError(f"edge {e.id}: ({a:+d}, {b:+d}) is not a valid orientation of a {kind} edge")

    def at(self, g: SignedGraph, edge_id: int, x: int) -> int:
        e = g.edges[edge_id]
        if x == e.u:
            return self.eta[edge_id][0]
        if x == e.v:
            return self.eta[edge_id][1]
        raise GraphError(f"vertex {x} is not an endpoint of edge {edge_id}")

    def is_sink(self, edge_id: int) -> bool:
        return self.eta[edge_id] == (1, 1)

    def is_source(self, edge_id: int) -> bool:
        return self.eta[edge_id] == (-1, -1)

    def tail_head(self, g: SignedGraph, edge_id: int) -> tuple[int, int]:
        """Tail and head of a positive edge."""
        e = g.edges[edge_id]
        a, b = self.eta[edge_id]
        if a == b:
            raise GraphError(f"edge {edge_id} is negative; it has no head")
        return (e.u, e.v) if a == 1 else (e.v, e.u)

    def replace(self, updates: dict[int, tuple[int, int]]) -> BiOrientation:
        eta = list(self.eta)
        for i, pair in updates.items():
            eta[i] = pair
        return BiOrientation(tuple(eta))

    def out_minus_in(self, g: SignedGraph, edge_ids: Iterable[int] | None = None) -> list[int]:
        """``d+(x) - d-(x)`` per vertex, over the selected edges."""
        out = [0] * g.vertex_count
        for e in g._select(edge_ids):
            a, b = self.eta[e.id]
            out[e.u] += a
            out[e.v] += b
        return out


@dataclass(frozen=True)
class Circulation:
    """An orientation together with one integer value per edge."""

    graph: SignedGraph
    orientation: BiOrientation
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.graph.m:
            raise GraphError(f"{len(self.values)} values for {self.graph.m} edges")
        self.orientation.check(self.graph)
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @classmethod
    def zero(cls, g: SignedGraph) -> Circulation:
        return cls(g, BiOrientation.reference(g), (0,) * g.m)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.values) if v != 0)

    def plus(self, other: Circulation) -> Circulation:
        """Edge-wise sum of two circulations with disjoint supports."""
        if other.graph != self.graph:
            raise GraphError("circulations live on different graphs")
        eta = list(self.orientation.eta)
        values = list(self.values)
        for i, v in enumerate(other.values):
            if v == 0:
                continue
            if values[i] != 0:
                raise GraphError(f"supports overlap at edge {i}")
            eta[i] = other.orientation.eta[i]
            values[i] = v
        return Circulation(self.graph, BiOrientation(tuple(eta)), tuple(values))


def boundary(c: Circulation) -> tuple[int, ...]:
    """``df(v) = sum_{E+(v)} f(e) - sum_{E-(v)} f(e)`` for every vertex."""
    g = c.graph
    out = [0] * g.vertex_count
    for e, (a, b), f in zip(g.edges, c.orientation.eta, c.values):
        out[e.u] += a * f
        out[e.v] += b * f
    return tuple(out)


def boundary_sum_on_set(c: Circulation, x_set: Iterable[int]) -> int:
    members = c.graph.check_vertices(x_set)
    d = boundary(c)
    return sum(d[x] for x in members)


def switch(g: SignedGraph, s: Iterable[int]) -> SignedGraph:
    """Switch at every vertex of ``s``: flip the edges with exactly one end in ``s``."""
    inside = g._membership(s)
    return g.with_signs([-e.sign if inside[e.u] != inside[e.v] else e.sign for e in g.edges])


def switch_orientation(g: SignedGraph, orientation: BiOrientation, s: Iterable[int]) -> BiOrientation:
    """Carry an orientation of ``g`` over to ``switch(g, s)``.

    Negating the incidence signs at the switched vertices keeps every edge
    valid under the new signature and negates ``d+ - d-`` (and any boundary)
    exactly on ``s``, so flows map to flows.
    """
    inside = g._membership(s)
    return BiOrientation(tuple(
        (-a if inside[e.u] else a, -b if inside[e.v] else b)
        for e, (a, b) in zip(g.edges, orientation.eta)
    ))


def switch_circulation(c: Circulation, s: Iterable[int]) -> Circulation:
    s = frozenset(s)
    return Circulation(switch(c.graph, s), switch_orientation(c.graph, c.orientation, s), c.values)
