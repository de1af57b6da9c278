"""Automorphisms, vertex-transitivity and permutation cycle structure.

All automorphism searches share one backtracking engine: vertices are
assigned images in order 0..n-1 with candidates tried ascending, so every
search yields permutations in lexicographic order of their image tuples.
Candidate sets are pruned by forward checking of adjacency and
non-adjacency, and by individualization-refinement: the colouring obtained
by individualizing the assigned vertices must match the one obtained from
their images.

Group orders come from a stabilizer chain whose basic orbits are closed by
that same search, which also lets very large groups be sampled uniformly
instead of listed.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from .budget import CapabilityError, Deadline
from .graph import Graph, GraphError, Partition, bits

DEFAULT_SEARCH_BOUND = 32
DEFAULT_MAX_ORDER = 500_000
DEFAULT_MAX_ENUMERATE = 20_000
DEFAULT_SAMPLES = 2_000


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise GraphError(f"not a permutation of 0..{len(self.image) - 1}: {self.image}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        image = list(range(n))
        for cyc in cycles:
            for i, v in enumerate(cyc):
                image[v] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(image))

    @classmethod
    def rotation(cls, n: int, shift: int) -> Permutation:
        return cls(tuple((v + shift) % n for v in range(n)))

    def __call__(self, v: int) -> int:
        return self.image[v]

    def __len__(self):
        return len(self.image)

    def compose(self, other: Permutation) -> Permutation:
        """``self`` after ``other``."""
        return Permutation(tuple(self.image[x] for x in other.image))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.image)
        for v, w in enumerate(self.image):
            inv[w] = v
        return Permutation(tuple(inv))

    def power(self, k: int) -> Permutation:
        n = len(self.image)
        out = list(range(n))
        for cyc in self.cycles():
            m = len(cyc)
            for i, v in enumerate(cyc):
                out[v] = cyc[(i + k) % m]
        return Permutation(tuple(out))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.image)
        out = []
        for start in range(len(self.image)):
            if seen[start]:
                continue
            cyc = []
            v = start
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = self.image[v]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))


@dataclass(frozen=True)
class OrbitFamily:
    """Cycles of a permutation, each listed in the order the permutation walks it.

    Every orbit starts at its smallest member; orbits are sorted by that member.
    """

    n: int
    orbits: tuple[tuple[int, ...], ...]

    @property
    def partition(self) -> Partition:
        return Partition.of(self.n, self.orbits)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.orbits)

    def is_uniform(self) -> bool:
        return len(set(self.lengths)) == 1

    def __len__(self):
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)


def cycle_decomposition(p: Permutation) -> OrbitFamily:
    return OrbitFamily(len(p), tuple(p.cycles()))


@dataclass(frozen=True)
class AutomorphismGroup:
    n: int
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def vertex_orbits(self) -> list[tuple[int, ...]]:
        return _orbits_under(self.n, self.elements)


def is_automorphism(g: Graph, p: Permutation) -> bool:
    if len(p) != g.n:
        raise GraphError(f"permutation has length {len(p)}, graph has {g.n} vertices")
    img = p.image
    for v in range(g.n):
        mapped = 0
        for w in bits(g.rows[v]):
            mapped |= 1 << img[w]
        if mapped != g.rows[img[v]]:
            return False
    return True


def refine_colours(g: Graph, individualized: Sequence[int] = ()) -> list[int]:
    """Stable colouring by iterated neighbour-colour multisets.

    The i-th individualized vertex starts in its own colour class. Colour ids
    are ranks of sorted signatures.
    """
    return _refine([bits(r) for r in g.rows], individualized)[0]


def _refine(nbrs: list[list[int]], individualized: Sequence[int]) -> tuple[list[int], tuple]:
    """Colouring plus a trace of the signatures seen at every round.

    Two runs whose individualized sequences are matched by an automorphism
    produce equal traces and colourings related by that automorphism; unequal
    traces therefore rule such an automorphism out.
    """
    n = len(nbrs)
    marks = {v: i + 1 for i, v in enumerate(individualized)}
    sig = [(marks.get(v, 0), len(nbrs[v])) for v in range(n)]
    trace = []
    count = -1
    while True:
        counts = Counter(sig)
        distinct = sorted(counts)
        rank = {x: i for i, x in enumerate(distinct)}
        colours = [rank[x] for x in sig]
        trace.append(tuple((x, counts[x]) for x in distinct))
        if len(distinct) == count or len(distinct) == n:
            return colours, tuple(trace)
        count = len(distinct)
        sig = [(colours[v], tuple(sorted([colours[w] for w in nbrs[v]]))) for v in range(n)]


def _colour_masks(colours: list[int]) -> dict[int, int]:
    masks: dict[int, int] = {}
    for v, c in enumerate(colours):
        masks[c] = masks.get(c, 0) | 1 << v
    return masks


class _Engine:
    """Search state for one graph, shared by every search on it.

    ``left(d)`` is the refinement individualizing 0..d (d = -1: none); it
    does not depend on the branch being explored, so it is computed once.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.nbrs = [bits(r) for r in g.rows]
        self._left: dict[int, tuple[list[int], tuple, dict[int, int]]] = {}

    def left(self, depth: int) -> tuple[list[int], tuple, dict[int, int]]:
        if depth not in self._left:
            colours, trace = _refine(self.nbrs, range(depth + 1))
            self._left[depth] = (colours, trace, _colour_masks(colours))
        return self._left[depth]

    def search(self, fixed: dict[int, int] | None = None,
               deadline: Deadline | None = None) -> Iterator[tuple[int, ...]]:
        """Yield automorphism image tuples in lexicographic order.

        ``fixed`` pins images of some vertices. At every node that leaves
        some vertex undecided, the colouring refined from the assigned
        vertices is compared with the one refined from their images;
        vertices may only map to vertices of the same colour.
        """
        g = self.g
        n = g.n
        rows = g.rows
        full = g.full_mask
        nbrs = self.nbrs
        deadline = deadline or Deadline()
        fixed = fixed or {}

        root_colours, _, rmask = self.left(-1)
        cand = [rmask[root_colours[v]] for v in range(n)]
        for v, w in fixed.items():
            cand[v] &= 1 << w
        if any(c == 0 for c in cand):
            return
        f = [-1] * n

        def refine_ok(v: int, new: list[int], used: int, identity: bool) -> bool:
            if all((new[u] & ~used).bit_count() == 1 for u in range(v + 1, n)):
                return True
            lcol, ltrace, lmasks = self.left(v)
            if identity:
                masks = lmasks
            else:
                rcol, rtrace = _refine(nbrs, f[:v + 1])
                if ltrace != rtrace:
                    return False
                masks = _colour_masks(rcol)
            for u in range(v + 1, n):
                c = new[u] & masks.get(lcol[u], 0)
                if not c & ~used:
                    return False
                new[u] = c
            return True

        def rec(v: int, cand: list[int], used: int, identity: bool) -> Iterator[tuple[int, ...]]:
            if v == n:
                yield tuple(f)
                return
            choices = cand[v] & ~used
            nv = rows[v]
            while choices:
                deadline.check()
                low = choices & -choices
                choices ^= low
                w = low.bit_length() - 1
                row_w = rows[w]
                new = cand[:]
                ok = True
                new_used = used | low
                for u in range(v + 1, n):
                    if nv >> u & 1:
                        c = new[u] & row_w
                    else:
                        c = new[u] & ~row_w & full
                    if not c & ~new_used:
                        ok = False
                        break
                    new[u] = c
                if not ok:
                    continue
                f[v] = w
                still = identity and w == v
                if refine_ok(v, new, new_used, still):
                    yield from rec(v + 1, new, new_used, still)
                f[v] = -1

        yield from rec(0, cand, 0, True)


_ENGINES: dict[Graph, _Engine] = {}
_CACHE_LIMIT = 64


def _engine(g: Graph) -> _Engine:
    eng = _ENGINES.get(g)
    if eng is None:
        if len(_ENGINES) >= _CACHE_LIMIT:
            _ENGINES.pop(next(iter(_ENGINES)))
        eng = _ENGINES[g] = _Engine(g)
    return eng


def _search(g: Graph, fixed: dict[int, int] | None = None,
            deadline: Deadline | None = None) -> Iterator[tuple[int, ...]]:
    return _engine(g).search(fixed, deadline)


def _check_bound(g: Graph, bound: int):
    if g.n > bound:
        raise CapabilityError(f"automorphism search is limited to n <= {bound}, got n = {g.n}")


@dataclass(frozen=True)
class StabilizerChain:
    """Transversals for the pointwise stabilizer chain along the base 0, 1, ..., n-1.

    ``transversals[i]`` holds one automorphism fixing 0..i-1 for every image
    of i that such automorphisms reach, sorted by that image. Every group
    element factors uniquely as t_0 * t_1 * ... * t_{n-1}.
    """

    n: int
    generators: tuple[Permutation, ...]
    transversals: tuple[tuple[Permutation, ...], ...]

    @property
    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def base_orbit(self, i: int) -> tuple[int, ...]:
        return tuple(t(i) for t in self.transversals[i])

    def _levels(self) -> list[tuple[Permutation, ...]]:
        return [t for t in self.transversals if len(t) > 1]

    def elements(self) -> Iterator[Permutation]:
        levels = self._levels()

        def rec(k: int, acc: tuple[int, ...]):
            if k == len(levels):
                yield Permutation(acc)
                return
            for t in levels[k]:
                yield from rec(k + 1, tuple(acc[x] for x in t.image))

        yield from rec(0, tuple(range(self.n)))

    def random_element(self, rng: random.Random) -> Permutation:
        """Uniformly distributed over the group."""
        acc = tuple(range(self.n))
        for level in self._levels():
            t = level[rng.randrange(len(level))]
            acc = tuple(acc[x] for x in t.image)
        return Permutation(acc)


def _transversal(n: int, base: int, gens: Sequence[Permutation]) -> dict[int, Permutation]:
    trans = {base: Permutation.identity(n)}
    queue = [base]
    for x in queue:
        for p in gens:
            y = p(x)
            if y not in trans:
                trans[y] = p.compose(trans[x])
                queue.append(y)
    return trans


_CHAINS: dict[Graph, StabilizerChain] = {}


def stabilizer_chain(g: Graph, bound: int = DEFAULT_SEARCH_BOUND,
                     deadline: Deadline | float | None = None) -> StabilizerChain:
    """Exact chain: each basic orbit is closed by searching for the missing images.

    Levels are processed deepest first, so the generators found so far
    always fix the current prefix. Only vertices sharing i's colour after
    individualizing 0..i-1 can be images of i.
    """
    _check_bound(g, bound)
    if g in _CHAINS:
        return _CHAINS[g]
    deadline = Deadline.coerce(deadline)
    n = g.n
    eng = _engine(g)
    gens: list[Permutation] = []
    transversals: list[tuple[Permutation, ...]] = [()] * n
    for i in range(n - 1, -1, -1):
        colours = eng.left(i - 1)[0]
        trans = _transversal(n, i, gens)
        for w in range(i + 1, n):
            if w in trans or colours[w] != colours[i]:
                continue
            fixed = {j: j for j in range(i)}
            fixed[i] = w
            p = find_automorphism(g, fixed, deadline)
            if p is not None:
                gens.append(p)
                trans = _transversal(n, i, gens)
        transversals[i] = tuple(trans[w] for w in sorted(trans))
    chain = StabilizerChain(n, tuple(gens), tuple(transversals))
    if len(_CHAINS) >= _CACHE_LIMIT:
        _CHAINS.pop(next(iter(_CHAINS)))
    _CHAINS[g] = chain
    return chain


def group_order(g: Graph, bound: int = DEFAULT_SEARCH_BOUND,
                deadline: Deadline | float | None = None) -> int:
    return stabilizer_chain(g, bound, deadline).order


def automorphism_group(g: Graph, bound: int = DEFAULT_SEARCH_BOUND, max_order: int = DEFAULT_MAX_ORDER,
                       deadline: Deadline | float | None = None) -> AutomorphismGroup:
    """Every automorphism of ``g``, sorted lexicographically by image.

    The order is read off the stabilizer chain first, so oversized groups are
    refused before any listing starts.
    """
    deadline = Deadline.coerce(deadline)
    order = group_order(g, bound, deadline)
    if order > max_order:
        raise CapabilityError(f"automorphism group has order {order} > max_order = {max_order}")
    elements = tuple(Permutation(img) for img in _search(g, deadline=deadline))
    if len(elements) != order:
        raise RuntimeError(f"search found {len(elements)} automorphisms, chain says {order}")
    return AutomorphismGroup(g.n, elements)


def find_automorphism(g: Graph, fixed: dict[int, int], deadline: Deadline | float | None = None
                      ) -> Permutation | None:
    """Lexicographically first automorphism extending ``fixed``, if any."""
    for img in _search(g, fixed=fixed, deadline=Deadline.coerce(deadline)):
        return Permutation(img)
    return None


def _orbits_under(n: int, gens: Iterable[Permutation]) -> list[tuple[int, ...]]:
    gens = list(gens)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in gens:
        for v, w in enumerate(p.image):
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(vs) for vs in groups.values())


def transitivity_generators(g: Graph, bound: int = DEFAULT_SEARCH_BOUND,
                            deadline: Deadline | float | None = None) -> list[Permutation] | None:
    """Automorphisms whose generated group moves 0 onto every vertex, or None if none exist."""
    _check_bound(g, bound)
    deadline = Deadline.coerce(deadline)
    if len(set(g.degrees())) > 1:
        return None
    gens: list[Permutation] = []
    reached = 1
    for w in range(1, g.n):
        if reached >> w & 1:
            continue
        p = find_automorphism(g, {0: w}, deadline)
        if p is None:
            return None
        gens.append(p)
        orbit0 = [o for o in _orbits_under(g.n, gens) if 0 in o][0]
        reached = 0
        for v in orbit0:
            reached |= 1 << v
    return gens


def is_vertex_transitive(g: Graph, bound: int = DEFAULT_SEARCH_BOUND,
                         deadline: Deadline | float | None = None) -> bool:
    return transitivity_generators(g, bound, deadline) is not None


def odd_cycle_lengths(n: int) -> list[int]:
    """Odd divisors of n greater than one, largest first."""
    return [d for d in range(n, 1, -1) if n % d == 0 and d % 2 == 1]


def _uniform_odd_length(p: Permutation) -> int | None:
    lengths = {len(c) for c in p.cycles()}
    if len(lengths) != 1:
        return None
    (ell,) = lengths
    return ell if ell > 1 and ell % 2 == 1 else None


def iter_uniform_odd_automorphisms(g: Graph, lengths: Sequence[int] | None = None,
                                   deadline: Deadline | float | None = None,
                                   max_enumerate: int = DEFAULT_MAX_ENUMERATE,
                                   samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Iterator[Permutation]:
    """Automorphisms whose cycles all share one odd length > 1.

    Lengths come in the given order (default: largest first) and each length
    in lexicographic order. Groups of order at most ``max_enumerate`` are
    listed completely; larger ones contribute the distinct hits among
    ``samples`` uniform random elements and their powers, drawn with ``seed``.
    """
    deadline = Deadline.coerce(deadline)
    wanted = [ell for ell in (lengths if lengths is not None else odd_cycle_lengths(g.n))
              if ell > 1 and ell % 2 == 1 and g.n % ell == 0]
    if not wanted:
        return
    pool = _uniform_odd_pool(g, deadline, max_enumerate, samples, seed)
    for ell in wanted:
        for img in pool.get(ell, ()):
            yield Permutation(img)


_POOLS: dict[tuple, dict[int, list[tuple[int, ...]]]] = {}


def _uniform_odd_pool(g: Graph, deadline: Deadline, max_enumerate: int, samples: int,
                      seed: int) -> dict[int, list[tuple[int, ...]]]:
    key = (g, max_enumerate, samples, seed)
    if key in _POOLS:
        return _POOLS[key]
    chain = stabilizer_chain(g, deadline=deadline)
    found: dict[int, set[tuple[int, ...]]] = {}
    if chain.order <= max_enumerate:
        for k, p in enumerate(chain.elements()):
            if k % 1024 == 0:
                deadline.check()
            ell = _uniform_odd_length(p)
            if ell is not None:
                found.setdefault(ell, set()).add(p.image)
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            deadline.check()
            p = chain.random_element(rng)
            lengths = {len(c) for c in p.cycles()}
            order = math.lcm(*lengths)
            for k in range(1, order):
                if order % k:
                    continue
                # cycles of length L split into cycles of length L / gcd(L, k)
                after = {L // math.gcd(L, k) for L in lengths}
                if len(after) == 1:
                    (ell,) = after
                    if ell > 1 and ell % 2 == 1:
                        found.setdefault(ell, set()).add(p.power(k).image)
    pool = {ell: sorted(imgs) for ell, imgs in found.items()}
    if len(_POOLS) >= _CACHE_LIMIT:
        _POOLS.pop(next(iter(_POOLS)))
    _POOLS[key] = pool
    return pool


def find_uniform_odd_automorphisms(g: Graph, limit: int | None = None,
                                   deadline: Deadline | float | None = None) -> list[Permutation]:
    if g.n % 2 == 0:
        raise GraphError(f"uniform odd automorphisms need odd order, got n = {g.n}")
    out = []
    for p in iter_uniform_odd_automorphisms(g, deadline=deadline):
        out.append(p)
        if limit is not None and len(out) >= limit:
            break
    return out


def is_uniform_odd(p: Permutation) -> bool:
    return _uniform_odd_length(p) is not None
