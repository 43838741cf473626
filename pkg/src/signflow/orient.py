"""Beta-orientations of graphs and signed graphs.

For an ordinary multigraph, ``d+(x) - d-(x) = 2 d+(x) - d(x)``, so a
beta-orientation is exactly an orientation whose out-degrees lie in

    A(x) = {o in [0, d(x)] : o = (beta(x) + d(x)) / 2  (mod 2k+1)}

(2 is invertible modulo an odd number).  The finder guesses out-degree
targets in ``A(x)`` near a balanced starting orientation and realises them
by reversing directed paths; if that fails it enumerates target vectors
with Hakimi's prefix conditions as pruning.  Realisation by path reversal
is exact, so exhausting the enumeration proves infeasibility.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass

from .analysis import classify_unbalance, edge_connectivity, min_negative_switch
from .core import BiOrientation, Circulation, SignedGraph, boundary, switch, switch_orientation
from .errors import (
    GraphError,
    HypothesisError,
    InvariantViolation,
    NotZBoundaryError,
    OrientationInfeasibleError,
    SearchBudgetError,
    StageError,
)

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class BoundaryTarget:
    k: int
    beta: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        object.__setattr__(self, "beta", tuple(int(b) % self.modulus for b in self.beta))

    @classmethod
    def of(cls, k: int, beta: Sequence[int]) -> BoundaryTarget:
        return cls(k, tuple(beta))

    @classmethod
    def zero(cls, k: int, n: int) -> BoundaryTarget:
        return cls(k, (0,) * n)

    @property
    def modulus(self) -> int:
        return 2 * self.k + 1

    @property
    def is_zboundary(self) -> bool:
        return sum(self.beta) % self.modulus == 0


@dataclass(frozen=True)
class OrientationCertificate:
    graph: SignedGraph
    orientation: BiOrientation
    target: BoundaryTarget

    @property
    def residues(self) -> tuple[int, ...]:
        M = self.target.modulus
        return tuple(d % M for d in self.orientation.out_minus_in(self.graph))

    def failures(self) -> list[int]:
        """Vertices where the congruence fails."""
        return [x for x, (r, b) in enumerate(zip(self.residues, self.target.beta)) if r != b]

    def verify(self) -> None:
        self.orientation.check(self.graph)
        if len(self.target.beta) != self.graph.vertex_count:
            raise InvariantViolation("target length differs from vertex count")
        bad = self.failures()
        if bad:
            raise InvariantViolation(f"congruence fails at vertices {bad}")


def half_mod(x: int, modulus: int) -> int:
    """The unique ``t`` in ``0..modulus-1`` with ``2t = x (mod modulus)``."""
    return (x * (modulus + 1) // 2) % modulus


# --- ordinary graphs ---------------------------------------------------------

class _Digraph:
    """Mutable orientation of an all-positive multigraph as tail/head arrays."""

    def __init__(self, g: SignedGraph, tails: list[int]):
        self.g = g
        self.tail = list(tails)
        self.out = [0] * g.vertex_count
        for e, t in zip(g.edges, self.tail):
            self.out[t] += 1

    def head(self, e: int) -> int:
        return self.g.edges[e].other(self.tail[e])

    def reverse(self, e: int) -> None:
        t = self.tail[e]
        h = self.head(e)
        self.out[t] -= 1
        self.out[h] += 1
        self.tail[e] = h

    def realise(self, targets: Sequence[int]) -> bool:
        """Reverse directed paths until out-degrees equal ``targets``.

        Each reversal moves one unit of out-degree from a surplus vertex to a
        deficit vertex.  When no surplus vertex reaches a deficit vertex, the
        set reached violates Hakimi's condition and the targets are infeasible.
        """
        g = self.g
        while True:
            surplus = [x for x in range(g.vertex_count) if self.out[x] > targets[x]]
            if not surplus:
                return True
            prev: dict[int, tuple[int, int] | None] = {x: None for x in surplus}
            queue = deque(surplus)
            found = None
            while queue and found is None:
                x = queue.popleft()
                for e in g.incidence[x]:
                    if self.tail[e] != x:
                        continue
                    y = self.head(e)
                    if y in prev:
                        continue
                    prev[y] = (x, e)
                    if self.out[y] < targets[y]:
                        found = y
                        break
                    queue.append(y)
            if found is None:
                return False
            y = found
            while prev[y] is not None:
                x, e = prev[y]
                self.reverse(e)
                y = x

    def orientation(self) -> BiOrientation:
        return BiOrientation(tuple(
            (1, -1) if t == e.u else (-1, 1) for e, t in zip(self.g.edges, self.tail)))


def _balanced_start(g: SignedGraph) -> list[int]:
    """Orient edges in id order out of the endpoint with smaller d+ - d-."""
    excess = [0] * g.vertex_count
    tails = []
    for e in g.edges:
        t = e.u if (excess[e.u], e.u) <= (excess[e.v], e.v) else e.v
        h = e.other(t)
        excess[t] += 1
        excess[h] -= 1
        tails.append(t)
    return tails


def _nearest_targets(current: list[int], allowed: list[list[int]], m: int, modulus: int) -> list[int] | None:
    targets = [min(a, key=lambda o: (abs(o - c), o)) for a, c in zip(allowed, current)]
    diff = sum(targets) - m
    while diff != 0:
        step = -modulus if diff > 0 else modulus
        best = None
        for x, (o, c) in enumerate(zip(targets, current)):
            new = o + step
            if new < 0 or new > allowed[x][-1]:
                continue
            cost = abs(new - c) - abs(o - c)
            if best is None or (cost, x) < best:
                best = (cost, x)
        if best is None:
            return None
        targets[best[1]] += step
        diff += step
    return targets


def _target_vectors(g: SignedGraph, allowed: list[list[int]], current: list[int]):
    """All out-degree vectors from ``allowed`` passing Hakimi's prefix tests."""
    n = g.vertex_count
    m = g.m
    order = sorted(range(n), key=lambda x: (-len(g.incidence[x]), x))
    pos = {x: i for i, x in enumerate(order)}
    inside = [0] * (n + 1)  # edges with both ends among the first i vertices
    crossing = [0] * (n + 1)
    for i in range(1, n + 1):
        x = order[i - 1]
        new_in = sum(1 for e in g.incidence[x] if pos[g.edges[e].other(x)] < i - 1)
        inside[i] = inside[i - 1] + new_in
        crossing[i] = crossing[i - 1] + len(g.incidence[x]) - 2 * new_in
    lo_rest = [0] * (n + 1)
    hi_rest = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        a = allowed[order[i]]
        lo_rest[i] = lo_rest[i + 1] + a[0]
        hi_rest[i] = hi_rest[i + 1] + a[-1]
    choice = [0] * n

    def rec(i: int, total: int):
        if i == n:
            if total == m:
                out = [0] * n
                for j, x in enumerate(order):
                    out[x] = choice[j]
                yield out
            return
        x = order[i]
        for o in sorted(allowed[x], key=lambda v: (abs(v - current[x]), v)):
            t = total + o
            if t < inside[i + 1] or t > inside[i + 1] + crossing[i + 1]:
                continue
            if t + lo_rest[i + 1] > m or t + hi_rest[i + 1] < m:
                continue
            choice[i] = o
            yield from rec(i + 1, t)

    yield from rec(0, 0)


def find_beta_orientation(h: SignedGraph, target: BoundaryTarget, *, budget: int = DEFAULT_BUDGET) -> OrientationCertificate:
    """Orientation of an all-positive multigraph with ``d+ - d- = beta (mod 2k+1)``.

    Raises NotZBoundaryError before searching when beta does not sum to 0,
    OrientationInfeasibleError when exhaustive search proves there is no
    beta-orientation, and SearchBudgetError when ``budget`` target vectors
    were tried without a verdict.
    """
    if any(e.sign != 1 for e in h.edges):
        raise GraphError("find_beta_orientation needs an all-positive multigraph")
    if len(target.beta) != h.vertex_count:
        raise GraphError("beta must have one entry per vertex")
    if not target.is_zboundary:
        raise NotZBoundaryError(
            f"beta sums to {sum(target.beta) % target.modulus} mod {target.modulus}, not 0",
            target.beta)
    M = target.modulus
    deg = h.degrees()
    allowed = []
    for x in range(h.vertex_count):
        want = half_mod(target.beta[x] + deg[x], M)
        a = list(range(want, deg[x] + 1, M))
        if not a:
            raise OrientationInfeasibleError(
                f"vertex {x} of degree {deg[x]} cannot reach residue {target.beta[x]}", [x])
        allowed.append(a)

    dg = _Digraph(h, _balanced_start(h))
    targets = _nearest_targets(dg.out, allowed, h.m, M)
    if targets is not None and dg.realise(targets):
        return _certify(h, dg, target)

    tried = 0
    for targets in _target_vectors(h, allowed, list(dg.out)):
        tried += 1
        if tried > budget:
            raise SearchBudgetError(f"no verdict after {budget} out-degree vectors")
        if dg.realise(targets):
            return _certify(h, dg, target)
    raise OrientationInfeasibleError("no out-degree vector in the residue classes is realisable")


def _certify(h: SignedGraph, dg: _Digraph, target: BoundaryTarget) -> OrientationCertificate:
    cert = OrientationCertificate(h, dg.orientation(), target)
    cert.verify()
    return cert


def lift_orientation(g: SignedGraph, sub_ids: Sequence[int], sub_orientation: BiOrientation,
                     base: BiOrientation | None = None) -> BiOrientation:
    """Copy an orientation of ``g.subgraph(sub_ids)`` back onto ``g``."""
    eta = list((base or BiOrientation.reference(g)).eta)
    for new, old in enumerate(sub_ids):
        eta[old] = sub_orientation.eta[new]
    return BiOrientation(tuple(eta))


# --- signed graphs -------------------------------------------------------------

@dataclass(frozen=True)
class QOrientationPlan:
    """Sink/source counts chosen for the negative edges."""

    t: int
    parity_match: bool
    sinks: int
    sources: int


def plan_negative_orientation(q_size: int, beta_sum: int, k: int) -> QOrientationPlan:
    """Pick how many negative edges become sinks so that ``2(sinks - sources) = sum beta``.

    With ``2t = sum beta (mod 2k+1)``: if ``t`` and ``|Q|`` have the same
    parity use ``(|Q|+t)/2`` sinks, otherwise ``(|Q|+t-2k-1)/2`` sinks.
    """
    M = 2 * k + 1
    t = half_mod(beta_sum, M)
    if (t - q_size) % 2 == 0:
        plan = QOrientationPlan(t, True, (q_size + t) // 2, (q_size - t) // 2)
    else:
        plan = QOrientationPlan(t, False, (q_size + t - M) // 2, (q_size + M - t) // 2)
    if plan.sinks < 0 or plan.sources < 0:
        raise StageError(
            "orient",
            f"|Q|={q_size} too small for t={t}: {plan.sinks} sinks, {plan.sources} sources",
            plan)
    return plan


def check_signed_hypotheses(g: SignedGraph, k: int, *, essential: bool) -> None:
    """Raise HypothesisError unless g is normalised, (12k-1)-connected and unbalanced."""
    lam = edge_connectivity(g)
    if lam < 12 * k - 1:
        raise HypothesisError(f"edge connectivity {lam} < {12 * k - 1}", lam)
    rep = classify_unbalance(g, k)
    if len(g.negative_edges()) != rep.min_negative_edges:
        raise HypothesisError(
            f"signature has {len(g.negative_edges())} negative edges, class minimum is "
            f"{rep.min_negative_edges}; switch at {sorted(rep.achieving_switch)} first", rep)
    ok = rep.is_essentially_unbalanced_2k1 if essential else rep.is_unbalanced_2k1
    if not ok:
        word = "essentially " if essential else ""
        raise HypothesisError(f"not {word}{2 * k + 1}-unbalanced", rep)


def signed_beta_orientation(g: SignedGraph, target: BoundaryTarget, *, check: bool = True,
                            essential: bool = False, budget: int = DEFAULT_BUDGET) -> OrientationCertificate:
    """Beta-orientation of a switch-normalised signed graph.

    The first sinks-many negative edges in id order become sink edges, the
    rest source edges; then the positive subgraph R gets a
    ``beta'``-orientation for ``beta' = beta - (d+ - d-)`` measured on Q.
    """
    k = target.k
    M = target.modulus
    if len(target.beta) != g.vertex_count:
        raise GraphError("beta must have one entry per vertex")
    if check:
        check_signed_hypotheses(g, k, essential=essential)
    q_ids = g.negative_edges()
    plan = plan_negative_orientation(len(q_ids), sum(target.beta), k)
    eta = list(BiOrientation.reference(g).eta)
    for j, e in enumerate(q_ids):
        eta[e] = (1, 1) if j < plan.sinks else (-1, -1)
    tau = BiOrientation(tuple(eta))
    on_q = tau.out_minus_in(g, q_ids)
    beta_r = BoundaryTarget(k, tuple((b - d) % M for b, d in zip(target.beta, on_q)))
    if not beta_r.is_zboundary:
        raise InvariantViolation("beta' is not a Z-boundary after orienting Q")
    r, r_ids = g.subgraph(g.positive_edges())
    d = find_beta_orientation(r, beta_r, budget=budget)
    cert = OrientationCertificate(g, lift_orientation(g, r_ids, d.orientation, tau), target)
    cert.verify()
    return cert


def modulo_orientation(g: SignedGraph, k: int, *, check: bool = True, budget: int = DEFAULT_BUDGET) -> OrientationCertificate:
    """Orientation with ``d+ = d- (mod 2k+1)`` at every vertex."""
    return signed_beta_orientation(g, BoundaryTarget.zero(k, g.vertex_count),
                                   check=check, essential=True, budget=budget)


def special_flow(g: SignedGraph, k: int, *, check: bool = True) -> Circulation:
    """``f = k`` on a modulo orientation; its boundary vanishes mod 2k+1."""
    cert = modulo_orientation(g, k, check=check)
    c = Circulation(g, cert.orientation, (k,) * g.m)
    if any(x % (2 * k + 1) for x in boundary(c)):
        raise InvariantViolation("special flow has a nonzero residue")
    return c


def normalise_then_orient(g: SignedGraph, target: BoundaryTarget, **kwargs) -> OrientationCertificate:
    """Beta-orientation for any signature: switch to a minimal member, solve, switch back.

    Switching at X negates ``d+ - d-`` on X, so the switched problem uses
    ``-beta`` on X.
    """
    rep = min_negative_switch(g)
    x = rep.achieving_switch
    h = switch(g, x)
    beta = tuple(-b if v in x else b for v, b in enumerate(target.beta))
    cert = signed_beta_orientation(h, BoundaryTarget(target.k, beta), **kwargs)
    back = OrientationCertificate(g, switch_orientation(h, cert.orientation, x), target)
    back.verify()
    return back
