from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from conftest import signed_multigraphs
from signflow.core import BiOrientation, Circulation, SignedGraph
from signflow.errors import ScaleBoundError
from signflow.generators import complete_multi, cycle_multi, small_corpus
from signflow.oracle import (
    candidate_ratios,
    circular_flow_number,
    exists_pq_flow,
    non_flow_edges,
    single_negative_obstruction,
    switch_class_flow_numbers,
    switch_class_invariance_check,
    verify_pq_flow,
)


def test_verify_cycle_two_flow():
    g = cycle_multi(5, 1)
    eta = tuple((1, -1) if e.id < 4 else (-1, 1) for e in g.edges)
    c = Circulation(g, BiOrientation(eta), (1,) * 5)
    assert verify_pq_flow(g, c, 2, 1)


def test_verify_names_range_violation():
    g = cycle_multi(3, 1)
    eta = ((1, -1), (1, -1), (-1, 1))
    c = Circulation(g, BiOrientation(eta), (2, 2, 1))
    check = verify_pq_flow(g, c, 5, 2)
    assert not check and check.edge == 2 and "outside" in check.violation


def test_verify_names_boundary_violation():
    g = cycle_multi(3, 1)
    c = Circulation(g, BiOrientation(((1, -1), (1, -1), (-1, 1))), (1, 2, 1))
    check = verify_pq_flow(g, c, 4, 1)
    assert not check and check.vertex is not None


@settings(max_examples=60, deadline=None)
@given(signed_multigraphs(min_n=2, max_n=4, max_m=5), st.sampled_from([(2, 1), (3, 1), (4, 1), (5, 2), (7, 3), (6, 1)]))
def test_exists_matches_naive_enumeration(g, pq):
    p, q = pq
    ok, witness = exists_pq_flow(g, p, q)
    assert ok == brute.pq_flow_exists(g, p, q)
    if ok:
        assert verify_pq_flow(g, witness, p, q)


def test_single_negative_edge_has_no_flow(triangle_one_negative):
    for p, q in [(2, 1), (3, 1), (5, 2), (8, 1)]:
        assert not exists_pq_flow(triangle_one_negative, p, q)[0]
    res = circular_flow_number(triangle_one_negative)
    assert res.is_infinite and res.infinite_certified and res.phi is None
    assert single_negative_obstruction(triangle_one_negative)
    assert non_flow_edges(triangle_one_negative) == [0, 1, 2]


@pytest.mark.parametrize("g, value", [
    (cycle_multi(4, 1), Fraction(2)),
    (cycle_multi(5, 1), Fraction(2)),
    (complete_multi(4, 1), Fraction(4)),
    (cycle_multi(3, 2), Fraction(2)),
    (complete_multi(4, 2), Fraction(2)),
    (cycle_multi(3, 2, "distinct:3"), Fraction(4)),
])
def test_known_flow_numbers(g, value):
    res = circular_flow_number(g)
    assert res.phi_c == value
    assert verify_pq_flow(g, res.witness, value.numerator, value.denominator)
    assert circular_flow_number(g, strategy="scan").phi_c == value


def test_even_cycle_two_flow():
    assert exists_pq_flow(cycle_multi(6, 1), 2, 1)[0]


def test_candidates_sorted_and_bounded():
    c = candidate_ratios(4)
    assert c == sorted(set(c))
    assert c[0] == 2 and c[-1] == 10
    assert all(r.denominator <= 4 for r in c)


def test_scale_bound():
    with pytest.raises(ScaleBoundError):
        exists_pq_flow(complete_multi(4, 3), 3, 1)
    with pytest.raises(ScaleBoundError):
        circular_flow_number(complete_multi(4, 3))


def test_triangle_class_invariance(triangle_one_negative):
    values = switch_class_flow_numbers(triangle_one_negative)
    assert len(values) == 4 and set(values.values()) == {None}
    assert switch_class_invariance_check(triangle_one_negative)


@pytest.mark.parametrize("name, g", small_corpus()[::9])
def test_scan_and_bisect_agree(name, g):
    a = circular_flow_number(g)
    b = circular_flow_number(g, strategy="scan")
    assert a.phi_c == b.phi_c and a.phi == b.phi


@pytest.mark.parametrize("name, g", small_corpus()[::7])
def test_monotone_above_flow_number(name, g):
    res = circular_flow_number(g)
    if res.is_infinite:
        return
    above = [r for r in candidate_ratios(g.m) if r >= res.phi_c][:6]
    below = [r for r in candidate_ratios(g.m) if r < res.phi_c][-4:]
    assert all(exists_pq_flow(g, r.numerator, r.denominator)[0] for r in above)
    assert not any(exists_pq_flow(g, r.numerator, r.denominator)[0] for r in below)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        circular_flow_number(cycle_multi(3, 1), strategy="guess")


def test_empty_graph():
    g = SignedGraph.from_edges(2, [])
    assert exists_pq_flow(g, 2, 1)[0]
