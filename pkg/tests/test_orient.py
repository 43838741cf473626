import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from conftest import signed_multigraphs
from signflow.core import SignedGraph, boundary, switch
from signflow.errors import (
    GraphError,
    HypothesisError,
    NotZBoundaryError,
    OrientationInfeasibleError,
    SearchBudgetError,
    StageError,
)
from signflow.generators import complete_multi
from signflow.orient import (
    BoundaryTarget,
    OrientationCertificate,
    check_signed_hypotheses,
    find_beta_orientation,
    half_mod,
    modulo_orientation,
    normalise_then_orient,
    plan_negative_orientation,
    signed_beta_orientation,
    special_flow,
)


@pytest.mark.parametrize("M", [3, 5, 7, 9])
def test_half_mod(M):
    for x in range(-2 * M, 2 * M):
        assert (2 * half_mod(x, M) - x) % M == 0


def test_triangle_all_ones_is_infeasible():
    g = SignedGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(OrientationInfeasibleError):
        find_beta_orientation(g, BoundaryTarget(1, (1, 1, 1)))


def test_non_boundary_rejected_before_search():
    g = complete_multi(3, 2)
    with pytest.raises(NotZBoundaryError) as info:
        find_beta_orientation(g, BoundaryTarget(1, (1, 0, 0)))
    assert info.value.stage == "orient"


def test_signed_input_rejected_by_plain_finder():
    with pytest.raises(GraphError):
        find_beta_orientation(complete_multi(3, 1, "single"), BoundaryTarget(1, (0, 0, 0)))


def test_budget_exhaustion_is_reported():
    g = SignedGraph.from_edges(4, [(0, 1), (0, 2), (1, 3)])
    target = BoundaryTarget(1, (1, 2, 2, 1))
    with pytest.raises(SearchBudgetError):
        find_beta_orientation(g, target, budget=0)
    assert target.beta not in brute.orientation_residues(4, [(0, 1), (0, 2), (1, 3)], 3)
    with pytest.raises(OrientationInfeasibleError):
        find_beta_orientation(g, target)


def test_certificate_failures_listed():
    g = SignedGraph.from_edges(2, [(0, 1), (0, 1)])
    cert = find_beta_orientation(g, BoundaryTarget(1, (2, 1)))
    assert cert.failures() == []
    wrong = OrientationCertificate(g, cert.orientation, BoundaryTarget(1, (0, 0)))
    assert wrong.failures() == [0, 1]


@settings(max_examples=120, deadline=None)
@given(signed_multigraphs(min_n=1, max_n=5, max_m=8), st.sampled_from([1, 2]), st.data())
def test_finder_agrees_with_enumeration(g, k, data):
    g = g.unsigned()
    M = 2 * k + 1
    beta = tuple(data.draw(st.lists(st.integers(0, M - 1), min_size=g.vertex_count, max_size=g.vertex_count)))
    feasible = beta in brute.orientation_residues(g.vertex_count, [(e.u, e.v) for e in g.edges], M)
    try:
        cert = find_beta_orientation(g, BoundaryTarget(k, beta))
    except (OrientationInfeasibleError, NotZBoundaryError):
        assert not feasible
    else:
        cert.verify()
        assert feasible


@pytest.mark.parametrize("q_size", range(0, 9))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_negative_plan_arithmetic(q_size, k):
    M = 2 * k + 1
    for beta_sum in range(M):
        try:
            plan = plan_negative_orientation(q_size, beta_sum, k)
        except StageError:
            assert q_size < M
            continue
        assert plan.sinks + plan.sources == q_size
        assert (2 * (plan.sinks - plan.sources) - beta_sum) % M == 0


def test_k4_quadrupled_pair_modulo_orientation():
    g = complete_multi(4, 4, "pair-in-class")
    cert = modulo_orientation(g, 1)
    o = cert.orientation
    assert sum(o.is_sink(e) for e in g.negative_edges()) == 1
    assert sum(o.is_source(e) for e in g.negative_edges()) == 1
    assert all(d % 3 == 0 for d in o.out_minus_in(g))
    assert all(d % 3 == 0 for d in boundary(special_flow(g, 1)))


def test_signed_beta_orientation_hits_every_boundary():
    g = complete_multi(4, 4, "pair-in-class")
    for beta in itertools.product(range(3), repeat=3):
        beta = beta + ((-sum(beta)) % 3,)
        cert = signed_beta_orientation(g, BoundaryTarget(1, beta), essential=True)
        assert cert.failures() == []


def test_hypotheses_checked(triangle_one_negative):
    with pytest.raises(HypothesisError):
        check_signed_hypotheses(triangle_one_negative, 1, essential=True)
    with pytest.raises(HypothesisError):
        modulo_orientation(triangle_one_negative, 1)


def test_unnormalised_signature_refused_then_normalised():
    g = switch(complete_multi(4, 4, "pair-in-class"), [0])
    with pytest.raises(HypothesisError):
        modulo_orientation(g, 1)
    cert = normalise_then_orient(g, BoundaryTarget(1, (0, 1, 2, 0)), essential=True)
    cert.verify()
