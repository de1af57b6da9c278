import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vthamilton.budget import BudgetExhausted, CapabilityError, Deadline
from vthamilton.cycles import hamilton_cycle, iter_hamilton_cycles
from vthamilton.factorization import PreconditionError, UniformOddCertificate, uniform_odd_two_factor
from vthamilton.generators import gen_circulant, gen_kneser
from vthamilton.graph import (Cycle, GraphError, complement, complete_graph, cycle_graph,
                              make_graph, path_graph)
from vthamilton.hamiltonicity import (FOUND, LIFT_FAILED, hamilton_path_from_cycle, lift_hamilton_cycle,
                                      lift_plan, paper_procedure)

from conftest import connected_circulants, graphs
from oracles import brute_hamiltonian

K333 = complement(gen_circulant(9, [3]))
CIRC15 = gen_circulant(15, [3, 5])
TRIANGLE_BLOCKS = [[0, 1, 2], [3, 4, 5], [6, 7, 8]]


def valid_hamilton(g, vertices):
    vs = list(vertices)
    return (sorted(vs) == list(range(g.n))
            and all(g.has_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))))


def block_hamilton_paths(g, block):
    return [p for p in itertools.permutations(block)
            if all(g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1))]


# --- exact oracle -------------------------------------------------------------

def test_oracle_examples():
    assert hamilton_cycle(cycle_graph(5)) == Cycle.of(range(5))
    assert hamilton_cycle(gen_kneser(5, 2)) is None
    assert not brute_hamiltonian(gen_kneser(5, 2))
    c = hamilton_cycle(K333)
    assert c is not None and valid_hamilton(K333, c.vertices)


def test_oracle_limits():
    with pytest.raises(GraphError):
        hamilton_cycle(complete_graph(2))
    with pytest.raises(CapabilityError):
        hamilton_cycle(cycle_graph(30))
    assert hamilton_cycle(cycle_graph(30), budget=5.0) is not None
    with pytest.raises(BudgetExhausted):
        hamilton_cycle(gen_circulant(41, [1, 6, 15]), budget=Deadline(0.0, stride=1))


def test_cycle_counts():
    assert len(list(iter_hamilton_cycles(complete_graph(5)))) == 12
    assert len(list(iter_hamilton_cycles(complete_graph(6)))) == 60
    assert len(list(iter_hamilton_cycles(complete_graph(5), unique=False))) == 24
    assert not list(iter_hamilton_cycles(gen_kneser(5, 2)))


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=3, max_n=8))
def test_oracle_matches_brute_force(g):
    c = hamilton_cycle(g)
    assert (c is not None) == brute_hamiltonian(g)
    if c is not None:
        assert valid_hamilton(g, c.vertices)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=3, max_n=7))
def test_cycle_enumeration_matches_brute_force(g):
    brute = set()
    for rest in itertools.permutations(range(1, g.n)):
        order = (0,) + rest
        if valid_hamilton(g, order):
            brute.add(Cycle.of(order))
    assert set(iter_hamilton_cycles(g)) == brute


# --- lifting ------------------------------------------------------------------

def test_lift_single_cycle_certificate():
    cert = uniform_odd_two_factor(cycle_graph(9))
    assert lift_hamilton_cycle(cycle_graph(9), cert, None) == cert.factor.cycles[0]


def test_lift_argument_errors():
    cert = UniformOddCertificate.build(TRIANGLE_BLOCKS, "test")
    g = complete_graph(9)
    with pytest.raises(GraphError):
        lift_hamilton_cycle(g, cert, None)
    with pytest.raises(GraphError):
        lift_hamilton_cycle(g, cert, [0, 1])
    with pytest.raises(GraphError):
        lift_hamilton_cycle(g, cert, [0, 1, 3])


def test_lift_k333():
    cert = uniform_odd_two_factor(K333, strategy="contract")
    plan = lift_plan(K333, cert, [0, 1, 2])
    assert plan is not None
    assert valid_hamilton(K333, plan.cycle().vertices)
    for a, b in plan.splice_edges:
        assert K333.has_edge(a, b)
    assert sorted(v for t in plan.traversals for v in t) == list(range(9))


def test_lift_obstruction_instance():
    # three triangles joined only by 0-3, 3-6, 6-0: each block would need two distinct portals
    g = make_graph(9, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 7), (7, 8), (8, 6),
                       (0, 3), (3, 6), (6, 0)])
    cert = UniformOddCertificate.build(TRIANGLE_BLOCKS, "test")
    assert cert.is_valid_for(g)
    for qc in ([0, 1, 2], [0, 2, 1]):
        assert lift_hamilton_cycle(g, cert, qc) is None
    assert hamilton_cycle(g) is None
    assert not brute_hamiltonian(g)


def test_circ15_contraction_cannot_lift():
    cert = uniform_odd_two_factor(CIRC15, strategy="contract")
    blocks = [c.vertices for c in cert.factor.cycles]
    assert [sorted(b) for b in blocks] == [[0, 3, 6, 9, 12], [1, 4, 7, 10, 13], [2, 5, 8, 11, 14]]
    for qc in ([0, 1, 2], [0, 2, 1]):
        assert lift_hamilton_cycle(CIRC15, cert, qc) is None
    # independent evidence: no Hamilton cycle runs through the residue classes one after another
    paths = [block_hamilton_paths(CIRC15, b) for b in blocks]
    for p0, p1, p2 in itertools.product(*paths):
        for seq in ((p0, p1, p2), (p0, p2, p1)):
            joined = [v for p in seq for v in p]
            assert not valid_hamilton(CIRC15, joined)
    contiguous = 0
    total = 0
    for c in iter_hamilton_cycles(CIRC15):
        total += 1
        runs = sum(1 for i in range(15) if c.vertices[i] % 3 != c.vertices[i - 1] % 3)
        contiguous += runs == 3
    assert total > 0 and contiguous == 0


# --- the procedure ------------------------------------------------------------

def test_procedure_c9():
    trace = paper_procedure(cycle_graph(9))
    assert trace.outcome == FOUND and trace.levels == ()
    assert trace.cycle == Cycle.of(range(9))


def test_procedure_circ15_reports_lift_failure():
    trace = paper_procedure(CIRC15, budget=10.0)
    assert trace.outcome == LIFT_FAILED and trace.cycle is None
    (level,) = trace.levels
    assert (level.certificate.cycle_length, level.certificate.cycle_count) == (5, 3)
    assert level.quotient == complete_graph(3)
    assert level.flags == {"quotient_connected": True, "quotient_odd_order": True,
                           "quotient_vertex_transitive": True}
    assert hamilton_cycle(CIRC15) is not None
    longest = paper_procedure(CIRC15, budget=10.0, strategy="longest")
    assert longest.outcome == FOUND and valid_hamilton(CIRC15, longest.cycle.vertices)


def test_procedure_k333():
    trace = paper_procedure(K333)
    assert trace.outcome == FOUND and valid_hamilton(K333, trace.cycle.vertices)
    level = trace.levels[0]
    assert (level.certificate.cycle_length, level.certificate.cycle_count) == (3, 3)
    assert level.quotient == complete_graph(3) and trace.hypotheses_hold


def test_procedure_preconditions():
    for g in (cycle_graph(8), gen_circulant(9, [3]), path_graph(5)):
        with pytest.raises(PreconditionError):
            paper_procedure(g)


def test_procedure_budget():
    g = gen_circulant(17, [2, 3, 7])
    trace = paper_procedure(g, budget=Deadline(0.0, stride=1), check_preconditions=False)
    assert trace.outcome == "budget_exhausted" and trace.cycle is None


@settings(max_examples=30, deadline=None)
@given(connected_circulants(), st.sampled_from(["longest", "contract"]))
def test_procedure_soundness(g, strategy):
    trace = paper_procedure(g, budget=10.0, strategy=strategy)
    if trace.found:
        assert valid_hamilton(g, trace.cycle.vertices)
        assert hamilton_cycle(g) is not None
    for lvl in trace.levels:
        if lvl.quotient is not None:
            assert None not in lvl.flags.values()
    if trace.levels:
        assert trace.levels[0].graph == g
    for a, b in zip(trace.levels, trace.levels[1:]):
        assert a.quotient == b.graph


# --- paths ----------------------------------------------------------------------

def test_paths_from_cycles():
    tri = Cycle.of([0, 1, 2])
    assert hamilton_path_from_cycle(tri) == [1, 2, 0]
    g7 = complete_graph(7)
    path = hamilton_path_from_cycle(hamilton_cycle(g7))
    assert sorted(path) == list(range(7))
    c = paper_procedure(CIRC15, budget=10.0, strategy="longest").cycle
    path = hamilton_path_from_cycle(c)
    assert sorted(path) == list(range(15))
    assert all(CIRC15.has_edge(a, b) for a, b in zip(path, path[1:]))
