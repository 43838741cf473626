import pytest

from signflow.analysis import edge_connectivity
from signflow.generators import (
    apply_sign_pattern,
    complete_multi,
    cycle_multi,
    family,
    random_multigraph,
    random_regular_multi,
    small_corpus,
)


def test_complete_multi_layout():
    g = complete_multi(4, 4)
    assert g.m == 24 and edge_connectivity(g) == 12
    assert all((g.edges[i].u, g.edges[i].v) == (0, 1) for i in range(4))


def test_pair_in_class_marks_two_parallel_edges():
    g = complete_multi(4, 4, "pair-in-class")
    assert g.negative_edges() == (0, 1)


def test_cycle_multi_triangle():
    g = cycle_multi(3, 1)
    assert [(e.u, e.v) for e in g.edges] == [(0, 1), (1, 2), (0, 2)]
    assert family("triangle-multi", 99, 2) == cycle_multi(3, 2)


def test_distinct_pattern_one_per_class():
    g = cycle_multi(3, 2, "distinct:3")
    assert g.negative_edges() == (0, 2, 4)


@pytest.mark.parametrize("seed", range(5))
def test_random_regular_multi(seed):
    g = random_regular_multi(6, 5, seed=seed)
    assert g.degrees() == [5] * 6
    assert random_regular_multi(6, 5, seed=seed) == g


def test_random_patterns_are_seeded():
    a = complete_multi(4, 2, "random:5", seed=3)
    assert a == complete_multi(4, 2, "random:5", seed=3)
    assert len(a.negative_edges()) == 5


@pytest.mark.parametrize("pattern", ["bogus", "random:99", "distinct:9"])
def test_bad_patterns(pattern):
    with pytest.raises(ValueError):
        apply_sign_pattern(3, [(0, 1), (1, 2)], pattern)


def test_random_multigraph_connected():
    for seed in range(10):
        g = random_multigraph(5, 7, seed=seed)
        assert g.m == 7 and edge_connectivity(g) >= 1


def test_corpus_is_small_unique_and_stable():
    corpus = small_corpus()
    assert len(corpus) >= 100
    assert all(g.m <= 10 for _, g in corpus)
    assert len({(g.vertex_count, g.edges) for _, g in corpus}) == len(corpus)
    assert [name for name, _ in small_corpus()] == [name for name, _ in corpus]
