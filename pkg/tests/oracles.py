"""Independent brute-force references used across the tests."""

import itertools

import networkx as nx


def brute_automorphisms(g):
    """Every automorphism by trying all n! permutations."""
    edges = g.edges()
    out = []
    for p in itertools.permutations(range(g.n)):
        if all(g.has_edge(p[u], p[v]) for u, v in edges):
            out.append(p)
    return out


def vf2_automorphisms(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return sorted(tuple(m[v] for v in range(g.n))
                  for m in nx.algorithms.isomorphism.GraphMatcher(h, h).isomorphisms_iter())


def brute_cycle_lengths(p):
    seen = set()
    lengths = []
    for s in range(len(p)):
        if s in seen:
            continue
        k, v = 0, s
        while v not in seen:
            seen.add(v)
            v = p[v]
            k += 1
        lengths.append(k)
    return lengths


def brute_hamiltonian(g):
    """Try every ordering that starts at vertex 0."""
    if g.n < 3:
        return False
    for rest in itertools.permutations(range(1, g.n)):
        order = (0,) + rest
        if all(g.has_edge(order[i], order[(i + 1) % g.n]) for i in range(g.n)):
            return True
    return False
