"""Uniform odd 2-factors: an odd number of vertex-disjoint cycles of one odd length.

The constructive routes all start from a uniform-odd automorphism ``a``
(every cycle of ``a`` has the same odd length ell > 1):

* orbit cycles: every orbit of ``a`` spans a cycle of length ell;
* orbit groups: the m orbits are split into i equal groups (i odd, i >= 3)
  and every group's vertex union spans one cycle;
* orbit transversals: ell cycles of length m, each meeting every orbit once;
* single group: all orbits together, i.e. one Hamilton cycle (flagged).

When no automorphism works, a direct backtracking search over equal-length
cycle packings decides the question. ``enumerate_two_factors`` is an
independent brute-force oracle used to audit all of the above.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from math import gcd

from .budget import BudgetExhausted, CapabilityError, Deadline
from .cycles import cycles_through, iter_hamilton_cycles
from .graph import (Cycle, Graph, GraphError, Partition, bits, induced, is_complete,
                    is_connected, is_k_regular)
from .symmetry import (OrbitFamily, Permutation, cycle_decomposition, is_automorphism,
                       is_uniform_odd, is_vertex_transitive, iter_uniform_odd_automorphisms,
                       odd_cycle_lengths)

TWO_FACTOR_ORACLE_BOUND = 14
DEFAULT_GROUP_BUDGET = 2.0
DEFAULT_MAX_CANDIDATES = 64
DEFAULT_MAX_GROUPINGS = 1000


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class TwoFactor:
    cycles: tuple[Cycle, ...]

    @classmethod
    def of(cls, cycles: Iterable[Cycle | Sequence[int]]) -> TwoFactor:
        cs = [c if isinstance(c, Cycle) else Cycle.of(c) for c in cycles]
        return cls(tuple(sorted(cs, key=lambda c: c.vertices)))

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    def vertex_sets(self) -> list[tuple[int, ...]]:
        return [tuple(sorted(c.vertices)) for c in self.cycles]

    def partition(self, n: int) -> Partition:
        return Partition.of(n, self.vertex_sets())

    def problems(self, g: Graph) -> list[str]:
        out = []
        seen = 0
        for c in self.cycles:
            if len(c) < 3:
                out.append(f"cycle {c.vertices} shorter than 3")
            for v in c.vertices:
                if not 0 <= v < g.n:
                    out.append(f"vertex {v} outside graph")
                    continue
                if seen >> v & 1:
                    out.append(f"vertex {v} covered twice")
                seen |= 1 << v
            for a, b in c.edges():
                if 0 <= a < g.n and 0 <= b < g.n and not g.has_edge(a, b):
                    out.append(f"cycle edge ({a}, {b}) not in graph")
        if seen != g.full_mask:
            out.append(f"uncovered vertices {bits(g.full_mask & ~seen)}")
        return out

    def is_valid_for(self, g: Graph) -> bool:
        return not self.problems(g)


@dataclass(frozen=True)
class UniformOddCertificate:
    """A checkable uniform odd 2-factor plus how it was obtained.

    ``route`` names the construction; ``notes`` records every place the
    construction went beyond a literal orbit-by-orbit reading.
    """

    factor: TwoFactor
    cycle_length: int
    cycle_count: int
    route: str
    automorphism: Permutation | None = None
    notes: tuple[str, ...] = field(default=())

    @classmethod
    def build(cls, cycles, route: str, automorphism: Permutation | None = None,
              notes: Iterable[str] = ()) -> UniformOddCertificate:
        factor = TwoFactor.of(cycles)
        lengths = set(factor.lengths)
        if len(lengths) != 1:
            raise GraphError(f"cycle lengths differ: {sorted(factor.lengths)}")
        return cls(factor, lengths.pop(), len(factor.cycles), route, automorphism, tuple(notes))

    def problems(self, g: Graph) -> list[str]:
        out = self.factor.problems(g)
        if any(len(c) != self.cycle_length for c in self.factor.cycles):
            out.append("cycles of unequal length")
        if self.cycle_length % 2 == 0:
            out.append(f"even cycle length {self.cycle_length}")
        if self.cycle_count != len(self.factor.cycles):
            out.append("cycle_count does not match the factor")
        if self.cycle_count % 2 == 0:
            out.append(f"even cycle count {self.cycle_count}")
        if self.cycle_length * self.cycle_count != g.n:
            out.append(f"{self.cycle_length} x {self.cycle_count} != n = {g.n}")
        return out

    def validate(self, g: Graph):
        probs = self.problems(g)
        if probs:
            raise GraphError("invalid certificate: " + "; ".join(probs))

    def is_valid_for(self, g: Graph) -> bool:
        return not self.problems(g)


# --- helpers on orbits ------------------------------------------------------

def _check_uniform_odd_automorphism(g: Graph, a: Permutation) -> OrbitFamily:
    if not is_automorphism(g, a):
        raise GraphError("permutation is not an automorphism of the graph")
    if not is_uniform_odd(a):
        raise GraphError(f"automorphism is not uniform odd: cycle type {a.cycle_type()}")
    return cycle_decomposition(a)


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _hamilton_in(g: Graph, vertices: Sequence[int], deadline: Deadline) -> list[int] | None:
    members = sorted(vertices)
    sub = induced(g, members)
    for c in iter_hamilton_cycles(sub, deadline, unique=False):
        return [members[i] for i in c.vertices]
    return None


def orbit_dichotomy(g: Graph, a: Permutation) -> str:
    """'edges' if every orbit induces an edge, 'edgeless' if none does, else 'mixed'."""
    fam = cycle_decomposition(a)
    flags = [any(g.rows[v] & _mask(o) for v in o) for o in fam.orbits]
    if all(flags):
        return "edges"
    if not any(flags):
        return "edgeless"
    return "mixed"


def _pattern_cycles(g: Graph, orbits: Sequence[tuple[int, ...]], shifts: Sequence[int],
                    deadline: Deadline) -> list[list[int]] | None:
    """Cycles traced by a transversal path and its images under powers of the automorphism.

    A path T = (t_1, ..., t_k) meeting each given orbit once, starting at the
    first orbit's first vertex, with t_k adjacent to a^s(t_1), closes into
    gcd(s, ell) cycles of length k * ell / gcd(s, ell): every other edge is
    an image of a path edge. s = 0 gives ell disjoint transversal cycles.
    Only the path edges and one closing edge are ever checked.
    """
    ell = len(orbits[0])
    k = len(orbits)
    where = {}
    for j, o in enumerate(orbits):
        for idx, v in enumerate(o):
            where[v] = (j, idx)
    rows = g.rows
    base = orbits[0][0]
    group_mask = _mask(v for o in orbits for v in o)

    def shift(v: int, t: int) -> int:
        j, idx = where[v]
        return orbits[j][(idx + t) % ell]

    def close(path: list[int], s: int) -> list[list[int]]:
        step = gcd(s, ell)  # number of cycles
        out = []
        for r0 in range(step):
            seq = []
            r = r0
            for _ in range(ell // step):
                seq.extend(shift(t, r) for t in path)
                r += s
            out.append(seq)
        return out

    path = [base]

    def rec(used_orbits: int) -> Iterator[list[list[int]]]:
        deadline.check()
        end = path[-1]
        if used_orbits == (1 << k) - 1:
            for s in shifts:
                if len(path) * ell // gcd(s, ell) < 3:
                    continue
                if rows[end] >> orbits[0][s % ell] & 1:
                    yield close(path, s)
            return
        for u in bits(rows[end] & group_mask):
            j = where[u][0]
            if used_orbits >> j & 1:
                continue
            path.append(u)
            yield from rec(used_orbits | 1 << j)
            path.pop()

    for found in rec(1):
        return found
    return None


# --- one cycle per orbit ---------------------------------------------------

def orbit_cycle_factor(g: Graph, a: Permutation, budget: Deadline | float | None = None,
                       group_budget: float | None = DEFAULT_GROUP_BUDGET) -> UniformOddCertificate | None:
    """One cycle per orbit of ``a``, each spanning its orbit.

    Step-form cycles v, a^d(v), a^{2d}(v), ... with gcd(d, ell) = 1 are tried
    first (one edge check each); otherwise an exact Hamilton search on the
    orbit's induced subgraph. Raises BudgetExhausted if an orbit search ran
    out of time and no orbit was proven cycle-free.
    """
    fam = _check_uniform_odd_automorphism(g, a)
    deadline = Deadline.coerce(budget)
    ell = len(fam.orbits[0])
    steps = [d for d in range(1, ell // 2 + 1) if gcd(d, ell) == 1]
    cycles = []
    unknown = False
    general = False
    for orbit in fam.orbits:
        cyc = None
        for d in steps:
            if g.has_edge(orbit[0], orbit[d]):
                cyc = [orbit[(i * d) % ell] for i in range(ell)]
                break
        if cyc is None:
            try:
                cyc = _hamilton_in(g, orbit, deadline.sub(group_budget))
            except BudgetExhausted:
                unknown = True
                continue
            if cyc is None:
                return None
            general = True
        cycles.append(cyc)
    if unknown:
        raise BudgetExhausted("orbit cycle search ran out of time")
    notes = ("general orbit search",) if general else ()
    return UniformOddCertificate.build(cycles, "orbit_cycles", a, notes)


# --- cycles across orbits --------------------------------------------------

def balanced_groupings(m: int, groups: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions of range(m) into ``groups`` blocks of equal size, canonically ordered."""
    size = m // groups

    def rec(left: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
        if not left:
            yield []
            return
        first, rest = left[0], left[1:]
        for others in itertools.combinations(rest, size - 1):
            block = (first,) + others
            remaining = tuple(x for x in rest if x not in others)
            for tail in rec(remaining):
                yield [block] + tail

    if groups < 1 or m % groups:
        return
    yield from rec(tuple(range(m)))


def _group_cycle(g: Graph, orbits: Sequence[tuple[int, ...]], deadline: Deadline) -> list[int] | None:
    ell = len(orbits[0])
    coprime = [s for s in range(1, ell) if gcd(s, ell) == 1]
    found = _pattern_cycles(g, orbits, coprime, deadline)
    if found is not None:
        return found[0]
    return _hamilton_in(g, [v for o in orbits for v in o], deadline)


def grouped_orbit_factor(g: Graph, a: Permutation, budget: Deadline | float | None = None,
                         group_budget: float | None = DEFAULT_GROUP_BUDGET,
                         allow_single: bool = True,
                         max_groupings: int = DEFAULT_MAX_GROUPINGS) -> UniformOddCertificate | None:
    """Cycles spanning unions of whole orbits, or transversals of all orbits.

    Tried in order: i equal groups of orbits for every odd divisor i >= 3 of
    the orbit count m (ascending); ell transversal cycles of length m; and,
    if ``allow_single``, one cycle through every orbit (i = 1).
    """
    fam = _check_uniform_odd_automorphism(g, a)
    deadline = Deadline.coerce(budget)
    orbits = fam.orbits
    m = len(orbits)
    ell = len(orbits[0])
    unknown = False
    dichotomy = orbit_dichotomy(g, a)
    base_notes = [] if dichotomy != "mixed" else ["orbits mixed: some induce edges, some do not"]

    for i in [d for d in range(3, m + 1) if m % d == 0 and d % 2 == 1]:
        for count, grouping in enumerate(balanced_groupings(m, i)):
            if count >= max_groupings:
                unknown = True
                break
            cycles = []
            for block in grouping:
                group = [orbits[j] for j in block]
                try:
                    cyc = _group_cycle(g, group, deadline.sub(group_budget))
                except BudgetExhausted:
                    unknown = True
                    cyc = None
                if cyc is None:
                    break
                cycles.append(cyc)
            else:
                return UniformOddCertificate.build(cycles, "orbit_groups", a, base_notes + [f"{i} groups of {m // i} orbits"])

    if m >= 3:
        try:
            found = _pattern_cycles(g, orbits, [0], deadline.sub(group_budget))
        except BudgetExhausted:
            unknown, found = True, None
        if found is not None:
            return UniformOddCertificate.build(found, "orbit_transversal", a,
                                               base_notes + [f"transversal fallback: {ell} cycles across all {m} orbits"])

    if allow_single:
        try:
            cyc = _group_cycle(g, list(orbits), deadline.sub(group_budget))
        except BudgetExhausted:
            unknown, cyc = True, None
        if cyc is not None:
            return UniformOddCertificate.build([cyc], "single_group", a,
                                               base_notes + ["single group (i = 1) beyond the i >= 3 reading"])
    if unknown:
        raise BudgetExhausted("grouped orbit search ran out of time or groupings")
    return None


# --- direct search ----------------------------------------------------------

def uniform_cycle_packing(g: Graph, ell: int, deadline: Deadline | float | None = None) -> list[list[int]] | None:
    """Cover all vertices with disjoint ell-cycles, building one cycle at a time.

    Each new cycle passes through the smallest uncovered vertex.
    """
    deadline = Deadline.coerce(deadline)
    if g.n % ell or ell < 3:
        return None
    rows = g.rows
    chosen: list[list[int]] = []

    def rec(free: int) -> bool:
        if not free:
            return True
        for u in bits(free):
            if (rows[u] & free).bit_count() < 2:
                return False
        v = (free & -free).bit_length() - 1
        for cyc in cycles_through(g, v, ell, free, deadline):
            chosen.append(cyc)
            if rec(free & ~_mask(cyc)):
                return True
            chosen.pop()
        return False

    return chosen if rec(g.full_mask) else None


# --- uniform odd 2-factors -------------------------------------------------

STRATEGIES = ("longest", "contract")


def _length_order(n: int, strategy: str) -> list[int]:
    lengths = odd_cycle_lengths(n)
    if strategy == "longest":
        return lengths
    if strategy == "contract":
        return [x for x in lengths if x != n] + [n]
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def uniform_odd_two_factor(g: Graph, budget: Deadline | float | None = None,
                           strategy: str = "longest",
                           group_budget: float | None = DEFAULT_GROUP_BUDGET,
                           max_candidates: int = DEFAULT_MAX_CANDIDATES,
                           check_preconditions: bool = True) -> UniformOddCertificate | None:
    """Find an odd number of equal odd-length cycles covering ``g``.

    ``strategy="longest"`` prefers the longest cycles (a Hamilton cycle
    when one is reachable); ``"contract"`` prefers factors with more than one
    cycle and only falls back to a single spanning cycle afterwards.

    Returns None when the searches prove that no such factor exists, and
    raises BudgetExhausted when time ran out before a proof.
    """
    deadline = Deadline.coerce(budget)
    n = g.n
    if check_preconditions:
        if n % 2 == 0 or n < 3:
            raise PreconditionError(f"needs odd order >= 3, got n = {n}")
        if not is_connected(g):
            raise PreconditionError("graph is not connected")
        if not is_vertex_transitive(g, deadline=deadline):
            raise PreconditionError("graph is not vertex-transitive")
    _length_order(n, strategy)

    if is_k_regular(g, 2) and is_connected(g):
        order = [0]
        prev, cur = -1, 0
        while True:
            nxt = [w for w in g.neighbors(cur) if w != prev][0]
            if nxt == 0:
                break
            order.append(nxt)
            prev, cur = cur, nxt
        return UniformOddCertificate.build([order], "two_regular")
    if is_complete(g):
        return UniformOddCertificate.build([list(range(n))], "complete")

    lengths = _length_order(n, strategy)
    phases = [lengths[:-1], lengths[-1:]] if strategy == "contract" else [lengths]
    for phase in phases:
        single_ok = strategy == "longest" or phase == [n]
        for tried, a in enumerate(iter_uniform_odd_automorphisms(g, phase, deadline)):
            if tried >= max_candidates:
                break
            for route in (orbit_cycle_factor, grouped_orbit_factor):
                kwargs = {} if route is orbit_cycle_factor else {"allow_single": single_ok}
                try:
                    cert = route(g, a, deadline, group_budget, **kwargs)
                except BudgetExhausted:
                    if deadline.expired():
                        raise
                    cert = None
                if cert is not None:
                    return cert
        # exhaustive, so a miss here is a proof of absence for these lengths
        for ell in phase:
            cycles = uniform_cycle_packing(g, ell, deadline)
            if cycles is not None:
                return UniformOddCertificate.build(cycles, "direct_search", None,
                                                   ["no automorphism-guided construction succeeded"])
    return None


# --- brute-force oracle -----------------------------------------------------

def enumerate_two_factors(g: Graph, lengths: Iterable[int] | None = None,
                          bound: int = TWO_FACTOR_ORACLE_BOUND,
                          deadline: Deadline | float | None = None) -> Iterator[TwoFactor]:
    """Every 2-factor of ``g`` exactly once.

    The smallest vertex still missing factor edges picks all of its
    remaining factor edges at once, so each factor has a single derivation.
    With ``lengths``, only factors whose cycle lengths all lie in the set are
    produced, and longer paths are cut early.
    """
    if g.n > bound:
        raise CapabilityError(f"2-factor enumeration is limited to n <= {bound}, got n = {g.n}")
    deadline = Deadline.coerce(deadline)
    allowed = None if lengths is None else frozenset(lengths)
    longest = None if allowed is None else max(allowed, default=0)
    n = g.n
    rows = g.rows
    deg = [0] * n
    fnbr = [0] * n           # factor neighbours as bitmask
    other = list(range(n))   # other endpoint of the path through an endpoint
    size = [1] * n           # vertex count of that path

    def add(v: int, w: int):
        # returns an undo record, or None if the edge is not allowed
        if fnbr[v] >> w & 1:
            return None
        if other[v] == w:
            if allowed is not None and size[v] not in allowed:
                return None
            changed = [(v, other[v], size[v]), (w, other[w], size[w])]
            other[v] = other[w] = -1
        else:
            a, b = other[v], other[w]
            s = size[a] + size[b]
            if longest is not None and (s > longest or (s == longest and not rows[a] >> b & 1)):
                return None
            changed = [(a, other[a], size[a]), (b, other[b], size[b])]
            other[a], other[b] = b, a
            size[a] = size[b] = s
        deg[v] += 1
        deg[w] += 1
        fnbr[v] |= 1 << w
        fnbr[w] |= 1 << v
        return v, w, changed

    def undo(rec):
        v, w, changed = rec
        deg[v] -= 1
        deg[w] -= 1
        fnbr[v] &= ~(1 << w)
        fnbr[w] &= ~(1 << v)
        for x, o, sz in reversed(changed):
            other[x], size[x] = o, sz

    def open_mask() -> int:
        return _mask(u for u in range(n) if deg[u] < 2)

    def feasible(open_: int) -> bool:
        for u in bits(open_):
            if (rows[u] & open_ & ~fnbr[u]).bit_count() < 2 - deg[u]:
                return False
        return True

    def rec() -> Iterator[TwoFactor]:
        deadline.check()
        open_ = open_mask()
        if not open_:
            yield _factor_from(n, fnbr)
            return
        if not feasible(open_):
            return
        v = (open_ & -open_).bit_length() - 1
        need = 2 - deg[v]
        cands = bits(rows[v] & open_ & ~fnbr[v])
        for combo in itertools.combinations(cands, need):
            done = []
            for w in combo:
                r = add(v, w)
                if r is None:
                    break
                done.append(r)
            else:
                yield from rec()
            for r in reversed(done):
                undo(r)

    yield from rec()


def _factor_from(n: int, fnbr: list[int]) -> TwoFactor:
    seen = 0
    cycles = []
    for s in range(n):
        if seen >> s & 1:
            continue
        cyc = [s]
        prev, cur = s, min(bits(fnbr[s]))
        while cur != s:
            cyc.append(cur)
            a, b = bits(fnbr[cur])
            prev, cur = cur, (b if a == prev else a)
        seen |= _mask(cyc)
        cycles.append(cyc)
    return TwoFactor.of(cycles)


def oracle_uniform_odd_factor(g: Graph, deadline: Deadline | float | None = None,
                              bound: int = TWO_FACTOR_ORACLE_BOUND) -> TwoFactor | None:
    """First uniform odd 2-factor found by the brute-force enumeration, longest cycles first."""
    for ell in odd_cycle_lengths(g.n):
        for f in enumerate_two_factors(g, lengths={ell}, bound=bound, deadline=deadline):
            return f
    return None
