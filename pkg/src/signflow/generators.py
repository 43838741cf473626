"""Graph families, sign patterns and the small test corpus.

Generation is deterministic for a given seed.  Parallel copies of an edge
are emitted consecutively, so ``complete_multi(4, 4)`` has the class of
pair (0, 1) on edge ids 0..3.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence

import numpy as np

from .core import NEGATIVE, POSITIVE, SignedGraph

FAMILIES = ("complete-multi", "cycle-multi", "triangle-multi", "random-regular-multi")


def _parallel_classes(pairs: Sequence[tuple[int, int]]) -> list[list[int]]:
    classes: dict[tuple[int, int], list[int]] = {}
    for i, (u, v) in enumerate(pairs):
        classes.setdefault((min(u, v), max(u, v)), []).append(i)
    return list(classes.values())


def apply_sign_pattern(n: int, pairs: Sequence[tuple[int, int]], pattern: str, seed: int = 0) -> SignedGraph:
    """Attach signs to an edge list.

    Patterns: ``none`` (all positive), ``all``, ``single`` (edge 0 negative),
    ``pair-in-class`` (two parallel copies of the first pair), ``distinct:c``
    (one edge in each of the first c parallel classes), ``random:c`` (c
    distinct edges chosen with ``seed``), ``bernoulli:p`` (each edge
    negative with probability p).
    """
    m = len(pairs)
    signs = [POSITIVE] * m
    name, _, arg = pattern.partition(":")
    rng = np.random.default_rng(seed)
    if name == "none":
        pass
    elif name == "all":
        signs = [NEGATIVE] * m
    elif name == "single":
        if m:
            signs[0] = NEGATIVE
    elif name == "pair-in-class":
        cls = next((c for c in _parallel_classes(pairs) if len(c) >= 2), None)
        if cls is None:
            raise ValueError("pair-in-class needs an edge of multiplicity >= 2")
        signs[cls[0]] = signs[cls[1]] = NEGATIVE
    elif name == "distinct":
        classes = _parallel_classes(pairs)
        c = int(arg)
        if c > len(classes):
            raise ValueError(f"only {len(classes)} parallel classes")
        for cls in classes[:c]:
            signs[cls[0]] = NEGATIVE
    elif name == "random":
        c = int(arg)
        if c > m:
            raise ValueError(f"cannot make {c} of {m} edges negative")
        for i in rng.choice(m, size=c, replace=False):
            signs[int(i)] = NEGATIVE
    elif name == "bernoulli":
        prob = float(arg)
        signs = [NEGATIVE if x < prob else POSITIVE for x in rng.random(m)]
    else:
        raise ValueError(f"unknown sign pattern {pattern!r}")
    return SignedGraph.from_edges(n, [(u, v, s) for (u, v), s in zip(pairs, signs)])


def complete_multi(n: int, mult: int, signs: str = "none", seed: int = 0) -> SignedGraph:
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) for _ in range(mult)]
    return apply_sign_pattern(n, pairs, signs, seed)


def cycle_multi(n: int, mult: int, signs: str = "none", seed: int = 0) -> SignedGraph:
    if n < 2:
        raise ValueError("a cycle needs at least 2 vertices")
    base = [(i, i + 1) for i in range(n - 1)] + ([(0, n - 1)] if n > 2 else [(0, 1)])
    pairs = [p for p in base for _ in range(mult)]
    return apply_sign_pattern(n, pairs, signs, seed)


def random_regular_multi(n: int, degree: int, signs: str = "none", seed: int = 0, tries: int = 100) -> SignedGraph:
    """Random loopless connected ``degree``-regular multigraph.

    Stubs are matched greedily: a stub of the vertex with most free stubs
    is joined to a stub of another vertex drawn in proportion to its free
    stubs.  This never gets stuck, since the largest count never exceeds
    the sum of the others.  Disconnected results are redrawn.
    """
    if n < 2 or degree < 1:
        raise ValueError("need n >= 2 and degree >= 1")
    if (n * degree) % 2:
        raise ValueError("n * degree must be even")
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        free = np.full(n, degree, dtype=np.int64)
        pairs = []
        while free.sum():
            top = np.flatnonzero(free == free.max())
            x = int(rng.choice(top))
            weights = free.astype(float)
            weights[x] = 0
            y = int(rng.choice(n, p=weights / weights.sum()))
            free[x] -= 1
            free[y] -= 1
            pairs.append((min(x, y), max(x, y)))
        if _connected(n, pairs):
            pairs.sort()
            return apply_sign_pattern(n, pairs, signs, seed)
    raise ValueError(f"no connected pairing found in {tries} tries")


def random_multigraph(n: int, m: int, seed: int = 0, signs: str = "bernoulli:0.4") -> SignedGraph:
    """Connected loopless multigraph: a random spanning tree plus random extra edges."""
    if m < n - 1:
        raise ValueError("too few edges for a connected graph")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    pairs = []
    for i in range(1, n):
        j = int(rng.integers(0, i))
        pairs.append((int(order[j]), int(order[i])))
    while len(pairs) < m:
        a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
        pairs.append((a, b))
    pairs = [(min(a, b), max(a, b)) for a, b in pairs]
    pairs.sort()
    return apply_sign_pattern(n, pairs, signs, seed)


def _connected(n: int, pairs) -> bool:
    seen = {0}
    stack = [0]
    adj: dict[int, list[int]] = {x: [] for x in range(n)}
    for a, b in pairs:
        adj[a].append(b)
        adj[b].append(a)
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def family(name: str, n: int, mult: int, signs: str = "none", seed: int = 0) -> SignedGraph:
    """Dispatch by family name; for random-regular-multi ``mult`` is the degree."""
    if name == "complete-multi":
        return complete_multi(n, mult, signs, seed)
    if name == "cycle-multi":
        return cycle_multi(n, mult, signs, seed)
    if name == "triangle-multi":
        return cycle_multi(3, mult, signs, seed)
    if name == "random-regular-multi":
        return random_regular_multi(n, mult, signs, seed)
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def _base_graphs() -> list[tuple[str, int, list[tuple[int, int]]]]:
    k4 = list(itertools.combinations(range(4), 2))
    k5 = list(itertools.combinations(range(5), 2))
    prism = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    k33 = [(a, b) for a in range(3) for b in range(3, 6)]
    wheel4 = [(0, 1), (1, 2), (2, 3), (0, 3)] + [(4, i) for i in range(4)]
    wheel5 = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)] + [(5, i) for i in range(5)]
    theta = [(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]
    out = [
        ("K4", 4, k4),
        ("K5", 5, k5),
        ("prism", 6, prism),
        ("K33", 6, k33),
        ("W4", 5, wheel4),
        ("W5", 6, wheel5),
        ("theta", 4, theta),
        ("K4+dbl", 4, k4 + [(0, 1), (2, 3)]),
        ("K4+dbl4", 4, k4 + k4[:4]),
    ]
    for n in (2, 3, 4, 5):
        for mult in (1, 2, 3):
            if n * mult <= 10 and n * mult >= 2 and not (n == 2 and mult == 1):
                base = [(i, i + 1) for i in range(n - 1)] + ([(0, n - 1)] if n > 2 else [(0, 1)])
                out.append((f"C{n}x{mult}", n, [p for p in base for _ in range(mult)]))
    return out


def small_corpus(seed: int = 2012, random_count: int = 40) -> list[tuple[str, SignedGraph]]:
    """Named small signed multigraphs (at most 10 edges) for oracle-scale checks.

    Each base graph appears all-positive and with several sign patterns;
    ``random_count`` extra connected multigraphs on 3 to 6 vertices follow.
    """
    out: list[tuple[str, SignedGraph]] = []
    for name, n, pairs in _base_graphs():
        m = len(pairs)
        patterns = ["none", "single"]
        if any(len(c) >= 2 for c in _parallel_classes(pairs)):
            patterns.append("pair-in-class")
        classes = len(_parallel_classes(pairs))
        if classes >= 3:
            patterns.append("distinct:3")
        patterns += [f"random:{min(c, m)}" for c in (2, 3, 4)]
        for j, pat in enumerate(patterns):
            out.append((f"{name}/{pat}", apply_sign_pattern(n, pairs, pat, seed + j)))
    rng = np.random.default_rng(seed)
    for i in range(random_count):
        n = int(rng.integers(3, 7))
        m = int(rng.integers(max(n, n - 1), 11))
        s = int(rng.integers(0, 2**31))
        out.append((f"rand{i}/n{n}m{m}", random_multigraph(n, m, seed=s)))
    seen = set()
    unique = []
    for name, g in out:
        key = (g.vertex_count, g.edges)
        if key not in seen:
            seen.add(key)
            unique.append((name, g))
    return unique
