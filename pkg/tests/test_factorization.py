import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vthamilton.budget import BudgetExhausted, CapabilityError, Deadline
from vthamilton.factorization import (PreconditionError, TwoFactor, UniformOddCertificate, balanced_groupings,
                                      enumerate_two_factors, grouped_orbit_factor, orbit_cycle_factor,
                                      orbit_dichotomy, oracle_uniform_odd_factor, uniform_cycle_packing,
                                      uniform_odd_two_factor)
from vthamilton.generators import gen_circulant, gen_kneser
from vthamilton.graph import (GraphError, complement, complete_graph, cycle_graph, make_graph,
                              path_graph)
from vthamilton.symmetry import Permutation, cycle_decomposition

from conftest import connected_circulants, graphs

K333 = complement(gen_circulant(9, [3]))
PART_ROTATION = Permutation.from_cycles(9, [(0, 3, 6), (1, 4, 7), (2, 5, 8)])


def brute_two_factor_count(g):
    """Edge subsets of size n in which every vertex has degree 2."""
    count = 0
    for subset in itertools.combinations(g.edges(), g.n):
        deg = [0] * g.n
        for a, b in subset:
            deg[a] += 1
            deg[b] += 1
        count += all(d == 2 for d in deg)
    return count


# --- certificate types ------------------------------------------------------

def test_two_factor_problems():
    g = cycle_graph(6)
    assert TwoFactor.of([range(6)]).is_valid_for(g)
    assert "uncovered vertices [5]" in TwoFactor.of([[0, 1, 2, 3, 4]]).problems(g)[-1]
    assert any("not in graph" in p for p in TwoFactor.of([[0, 1, 2], [3, 4, 5]]).problems(g))
    assert any("twice" in p for p in TwoFactor.of([[0, 1, 2], [2, 3, 4, 5]]).problems(complete_graph(6)))


def test_certificate_checks():
    g = complete_graph(9)
    cert = UniformOddCertificate.build([[0, 1, 2], [3, 4, 5], [6, 7, 8]], "test")
    assert cert.cycle_length == 3 and cert.cycle_count == 3 and cert.is_valid_for(g)
    with pytest.raises(GraphError):
        UniformOddCertificate.build([[0, 1, 2], [3, 4, 5, 6, 7, 8]], "test")
    even = UniformOddCertificate.build([[0, 1, 2, 3]], "test")
    assert not even.is_valid_for(complete_graph(4))
    with pytest.raises(GraphError):
        even.validate(complete_graph(4))


def test_balanced_groupings():
    gs = list(balanced_groupings(6, 3))
    assert len(gs) == 15  # 6! / (2!^3 3!)
    assert gs[0] == [(0, 1), (2, 3), (4, 5)]
    assert list(balanced_groupings(9, 3))[0] == [(0, 1, 2), (3, 4, 5), (6, 7, 8)]
    assert len(list(balanced_groupings(9, 3))) == 280
    assert list(balanced_groupings(5, 3)) == []


# --- one cycle per orbit ---------------------------------------------------

def test_orbit_cycles_c9_rotation():
    cert = orbit_cycle_factor(cycle_graph(9), Permutation.rotation(9, 1))
    assert (cert.cycle_length, cert.cycle_count, cert.route) == (9, 1, "orbit_cycles")
    assert cert.factor.cycles[0].vertices == tuple(range(9))


def test_orbit_cycles_circ15_step3():
    g = gen_circulant(15, [3, 5])
    cert = orbit_cycle_factor(g, Permutation.rotation(15, 3))
    assert (cert.cycle_length, cert.cycle_count) == (5, 3)
    assert [c.vertices for c in cert.factor.cycles] == [(0, 3, 6, 9, 12), (1, 4, 7, 10, 13), (2, 5, 8, 11, 14)]
    assert cert.is_valid_for(g) and not cert.notes


def test_orbit_cycles_absent_when_orbits_edgeless():
    g = gen_circulant(9, [2])
    a = Permutation.rotation(9, 3)
    assert orbit_dichotomy(g, a) == "edgeless"
    assert orbit_cycle_factor(g, a) is None


def test_orbit_cycles_reject_bad_permutations():
    with pytest.raises(GraphError):
        orbit_cycle_factor(cycle_graph(9), Permutation.rotation(9, 2).compose(Permutation.from_cycles(9, [(0, 1)])))
    with pytest.raises(GraphError):
        orbit_cycle_factor(cycle_graph(9), Permutation.identity(9))
    with pytest.raises(GraphError):
        grouped_orbit_factor(cycle_graph(9), Permutation.from_cycles(9, [(0, 1, 2)]))


# --- cycles across orbits --------------------------------------------------

def test_grouped_k333_transversal_triangles():
    assert orbit_dichotomy(K333, PART_ROTATION) == "edgeless"
    assert orbit_cycle_factor(K333, PART_ROTATION) is None
    cert = grouped_orbit_factor(K333, PART_ROTATION)
    assert cert.route == "orbit_transversal"
    assert (cert.cycle_length, cert.cycle_count) == (3, 3)
    parts = [{0, 3, 6}, {1, 4, 7}, {2, 5, 8}]
    for c in cert.factor.cycles:
        assert all(len(set(c.vertices) & p) == 1 for p in parts)
    assert any("transversal" in note for note in cert.notes)


def test_grouped_c15_needs_single_group():
    g = gen_circulant(15, [4])
    a = Permutation.rotation(15, 5)
    assert orbit_dichotomy(g, a) == "edgeless"
    cert = grouped_orbit_factor(g, a)
    assert cert.route == "single_group" and cert.cycle_count == 1 and cert.cycle_length == 15
    assert any("i = 1" in note for note in cert.notes)
    assert grouped_orbit_factor(g, a, allow_single=False) is None


def test_grouped_absent_on_edgeless_graph():
    assert grouped_orbit_factor(make_graph(9, []), Permutation.rotation(9, 3)) is None


def test_grouped_orbit_groups_on_27_vertices():
    # rotation by 9 has nine edgeless orbits {r, r+9, r+18}; step-3 edges join orbits r, r+3, r+6
    g = gen_circulant(27, [1, 3])
    a = Permutation.rotation(27, 9)
    assert orbit_dichotomy(g, a) == "edgeless"
    cert = grouped_orbit_factor(g, a)
    assert cert.route == "orbit_groups"
    assert (cert.cycle_length, cert.cycle_count) == (9, 3)
    orbits = [set(o) for o in cycle_decomposition(a).orbits]
    for c in cert.factor.cycles:
        vs = set(c.vertices)
        assert all(o <= vs or not o & vs for o in orbits)
    assert cert.is_valid_for(g)


# --- uniform odd 2-factors -------------------------------------------------

def test_factor_base_cases():
    cert = uniform_odd_two_factor(complete_graph(7))
    assert (cert.cycle_length, cert.cycle_count, cert.route) == (7, 1, "complete")
    cert = uniform_odd_two_factor(cycle_graph(9))
    assert (cert.cycle_length, cert.route) == (9, "two_regular")


def test_factor_strategies_on_circ15():
    g = gen_circulant(15, [3, 5])
    assert uniform_odd_two_factor(g).cycle_length == 15
    cert = uniform_odd_two_factor(g, strategy="contract")
    assert cert.route == "orbit_cycles"
    assert [c.vertices for c in cert.factor.cycles] == [(0, 3, 6, 9, 12), (1, 4, 7, 10, 13), (2, 5, 8, 11, 14)]
    with pytest.raises(ValueError):
        uniform_odd_two_factor(g, strategy="shortest")


def test_factor_k333_contract_gives_triangles():
    cert = uniform_odd_two_factor(K333, strategy="contract")
    assert (cert.cycle_length, cert.cycle_count) == (3, 3)
    assert cert.is_valid_for(K333)


def test_factor_preconditions():
    with pytest.raises(PreconditionError):
        uniform_odd_two_factor(cycle_graph(6))
    with pytest.raises(PreconditionError):
        uniform_odd_two_factor(gen_circulant(9, [3]))
    with pytest.raises(PreconditionError):
        uniform_odd_two_factor(path_graph(5))


def test_factor_budget_is_reported_not_absent():
    # a graph no other test touches, so no cached search state helps
    with pytest.raises(BudgetExhausted):
        uniform_odd_two_factor(gen_circulant(19, [2, 7, 8]), budget=Deadline(0.0, stride=1))


def test_factor_is_deterministic():
    g = gen_circulant(15, [1, 6])
    assert uniform_odd_two_factor(g, strategy="contract") == uniform_odd_two_factor(g, strategy="contract")


@settings(max_examples=40, deadline=None)
@given(connected_circulants(), st.sampled_from(["longest", "contract"]))
def test_factor_certificates_validate(g, strategy):
    cert = uniform_odd_two_factor(g, strategy=strategy)
    assert cert is not None
    cert.validate(g)
    if cert.route == "orbit_cycles":
        orbits = {frozenset(o) for o in cycle_decomposition(cert.automorphism).orbits}
        assert {frozenset(c.vertices) for c in cert.factor.cycles} == orbits


# --- direct search and the oracle ---------------------------------------------

def test_uniform_cycle_packing():
    cycles = uniform_cycle_packing(K333, 3)
    assert sorted(len(c) for c in cycles) == [3, 3, 3]
    assert uniform_cycle_packing(cycle_graph(9), 3) is None
    assert uniform_cycle_packing(cycle_graph(9), 4) is None


def test_enumeration_counts():
    assert len(list(enumerate_two_factors(cycle_graph(9)))) == 1
    assert len(list(enumerate_two_factors(complete_graph(5)))) == 12
    assert len(list(enumerate_two_factors(gen_circulant(9, [3])))) == 1
    assert len(list(enumerate_two_factors(complete_graph(6)))) == brute_two_factor_count(complete_graph(6))
    assert list(enumerate_two_factors(gen_kneser(5, 2), lengths={5}))
    assert not list(enumerate_two_factors(gen_kneser(5, 2), lengths={10}))
    with pytest.raises(CapabilityError):
        next(enumerate_two_factors(cycle_graph(15)))


def test_enumeration_count_k5_closed_form():
    # (5-1)!/2 Hamilton cycles and no other split of 5 into cycles of length >= 3
    assert len(list(enumerate_two_factors(complete_graph(5)))) == 24 // 2 == brute_two_factor_count(complete_graph(5))


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=3, max_n=7))
def test_enumeration_matches_edge_subsets(g):
    factors = list(enumerate_two_factors(g))
    assert len(factors) == brute_two_factor_count(g)
    assert len(set(factors)) == len(factors)
    assert all(f.is_valid_for(g) for f in factors)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=3, max_n=7), st.sets(st.integers(3, 7), min_size=1))
def test_length_filter_matches_unfiltered(g, lengths):
    filtered = set(enumerate_two_factors(g, lengths=lengths))
    expected = {f for f in enumerate_two_factors(g) if set(f.lengths) <= lengths}
    assert filtered == expected


def test_oracle_factor():
    f = oracle_uniform_odd_factor(K333)
    assert f.lengths == (9,)
    assert oracle_uniform_odd_factor(gen_circulant(9, [3])).lengths == (3, 3, 3)
    assert oracle_uniform_odd_factor(make_graph(9, [])) is None
