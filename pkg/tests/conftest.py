import pytest
from hypothesis import strategies as st

from signflow.core import SignedGraph

ACCEPTANCE_LINES: list[str] = []


@st.composite
def signed_multigraphs(draw, min_n=2, max_n=6, max_m=9, connected=False):
    n = draw(st.integers(min_n, max_n))
    edges = []
    if connected:
        for x in range(1, n):
            edges.append((draw(st.integers(0, x - 1)), x))
    extra = draw(st.integers(0, max(max_m - len(edges), 0))) if n > 1 else 0
    for _ in range(extra):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 2))
        edges.append((u, v if v < u else v + 1))
    signs = draw(st.lists(st.sampled_from([1, -1]), min_size=len(edges), max_size=len(edges)))
    return SignedGraph.from_edges(n, [(u, v, s) for (u, v), s in zip(edges, signs)])


@pytest.fixture
def triangle_one_negative():
    return SignedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2, -1)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
