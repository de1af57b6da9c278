"""Immutable simple graphs on vertices 0..n-1.

Adjacency is kept as one Python int bitmask per vertex, which works for any
n and is fast for the n <= 64 graphs this package is built around.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass


class GraphError(ValueError):
    """Invalid graph, vertex set, partition or cycle."""


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be positive, got {self.n}")
        if len(self.rows) != self.n:
            raise GraphError("one adjacency row per vertex required")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"row {v} references a vertex >= {self.n}")
            if row >> v & 1:
                raise GraphError(f"self-loop at {v}")
            w = row
            while w:
                low = w & -w
                u = low.bit_length() - 1
                if not self.rows[u] >> v & 1:
                    raise GraphError(f"adjacency not symmetric at ({v}, {u})")
                w ^= low

    def has_edge(self, v: int, w: int) -> bool:
        return bool(self.rows[v] >> w & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.rows[v])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(self.n) for w in bits(self.rows[v] >> (v + 1) << (v + 1))]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def make_graph(n: int, edges: Iterable[Iterable[int]]) -> Graph:
    if n < 1:
        raise GraphError(f"vertex count must be positive, got {n}")
    rows = [0] * n
    for e in edges:
        ends = sorted(e) if isinstance(e, (set, frozenset)) else list(e)
        if len(ends) == 1:
            raise GraphError(f"self-loop at {ends[0]}")
        if len(ends) != 2:
            raise GraphError(f"edge {e!r} does not have two endpoints")
        v, w = ends
        if not (0 <= v < n and 0 <= w < n):
            raise GraphError(f"edge ({v}, {w}) has an endpoint outside 0..{n - 1}")
        if v == w:
            raise GraphError(f"self-loop at {v}")
        rows[v] |= 1 << w
        rows[w] |= 1 << v
    return Graph(n, tuple(rows))


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def cycle_graph(n: int) -> Graph:
    return make_graph(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> Graph:
    return make_graph(n, [(v, v + 1) for v in range(n - 1)])


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(g.rows)))


def vertex_set(g: Graph, members: Iterable[int]) -> tuple[int, ...]:
    """Canonical (sorted, duplicate-free, range-checked) vertex set."""
    s = tuple(sorted(set(members)))
    if s and not (0 <= s[0] and s[-1] < g.n):
        raise GraphError(f"vertex set {s} not inside 0..{g.n - 1}")
    return s


def induced(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph induced by ``s``, relabelled 0..|s|-1 in ascending order."""
    members = vertex_set(g, s)
    if not members:
        raise GraphError("induced subgraph of an empty vertex set")
    index = {v: i for i, v in enumerate(members)}
    rows = []
    for v in members:
        row = 0
        for w in bits(g.rows[v]):
            if w in index:
                row |= 1 << index[w]
        rows.append(row)
    return Graph(len(members), tuple(rows))


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering 0..n-1, ordered by smallest member."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        canon = []
        seen = 0
        for b in blocks:
            block = tuple(sorted(b))
            if not block:
                raise GraphError("empty block in partition")
            if len(set(block)) != len(block):
                raise GraphError(f"repeated vertex in block {block}")
            for v in block:
                if not 0 <= v < n:
                    raise GraphError(f"block vertex {v} outside 0..{n - 1}")
                if seen >> v & 1:
                    raise GraphError(f"vertex {v} lies in two blocks")
                seen |= 1 << v
            canon.append(block)
        if seen != (1 << n) - 1:
            missing = bits(((1 << n) - 1) & ~seen)
            raise GraphError(f"partition misses vertices {missing}")
        canon.sort()
        return cls(n, tuple(canon))

    def block_of(self) -> list[int]:
        owner = [0] * self.n
        for i, block in enumerate(self.blocks):
            for v in block:
                owner[v] = i
        return owner

    def __len__(self):
        return len(self.blocks)


def quotient_by_partition(g: Graph, p: Partition | Sequence[Iterable[int]]) -> Graph:
    """Contract every block to one vertex; blocks are adjacent iff some edge joins them."""
    if not isinstance(p, Partition):
        p = Partition.of(g.n, p)
    elif p.n != g.n:
        raise GraphError(f"partition is over {p.n} vertices, graph has {g.n}")
    owner = p.block_of()
    rows = [0] * len(p.blocks)
    for v, w in g.edges():
        a, b = owner[v], owner[w]
        if a != b:
            rows[a] |= 1 << b
            rows[b] |= 1 << a
    return Graph(len(p.blocks), tuple(rows))


def reachable(g: Graph, start: int = 0) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.rows[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def is_connected(g: Graph) -> bool:
    return reachable(g, 0) == g.full_mask


def components(g: Graph) -> list[tuple[int, ...]]:
    left = g.full_mask
    out = []
    while left:
        start = (left & -left).bit_length() - 1
        comp = reachable(g, start)
        out.append(tuple(bits(comp)))
        left &= ~comp
    return out


def is_k_regular(g: Graph, k: int) -> bool:
    return all(d == k for d in g.degrees())


def is_complete(g: Graph) -> bool:
    return is_k_regular(g, g.n - 1)


@dataclass(frozen=True)
class Cycle:
    """A cycle of at least three distinct vertices in canonical form.

    Canonical form starts at the smallest vertex and continues towards its
    smaller cycle neighbour, so two Cycles are equal iff they have the same
    vertex set and the same cyclic adjacency.
    """

    vertices: tuple[int, ...]

    @classmethod
    def of(cls, seq: Iterable[int]) -> Cycle:
        vs = list(seq)
        if len(vs) < 3:
            raise GraphError(f"a cycle needs at least 3 vertices, got {vs}")
        if len(set(vs)) != len(vs):
            raise GraphError(f"repeated vertex in cycle {vs}")
        i = vs.index(min(vs))
        vs = vs[i:] + vs[:i]
        if vs[-1] < vs[1]:
            vs = [vs[0]] + vs[:0:-1]
        return cls(tuple(vs))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def is_in(self, g: Graph) -> bool:
        return all(0 <= v < g.n for v in self.vertices) and all(g.has_edge(a, b) for a, b in self.edges())

    def is_hamiltonian_in(self, g: Graph) -> bool:
        return len(self.vertices) == g.n and self.is_in(g)
