"""Exact backtracking searches for Hamilton cycles and fixed-length cycles."""

from __future__ import annotations

from collections.abc import Iterator

from .budget import CapabilityError, Deadline
from .graph import Cycle, Graph, GraphError, bits, is_connected

DEFAULT_ORACLE_BOUND = 24


def _pc(x: int) -> int:
    return x.bit_count()


def iter_hamilton_cycles(g: Graph, deadline: Deadline | float | None = None,
                         unique: bool = True) -> Iterator[Cycle]:
    """Yield Hamilton cycles of ``g``.

    Paths grow from vertex 0. Pruning: every unvisited vertex keeps two
    usable neighbours, a vertex left with exactly two usable neighbours one
    of which is the path end is taken next, and the unvisited vertices must
    stay reachable from the path end. With ``unique`` each undirected cycle
    is produced once.
    """
    deadline = Deadline.coerce(deadline)
    n = g.n
    rows = g.rows
    if n < 3:
        return
    if any(r.bit_count() < 2 for r in rows) or not is_connected(g):
        return
    start = 0
    full = g.full_mask
    path = [start]

    def rec(end: int, unvisited: int) -> Iterator[Cycle]:
        deadline.check()
        if not unvisited:
            if rows[end] >> start & 1 and (not unique or path[1] < path[-1]):
                yield Cycle.of(path)
            return
        usable = unvisited | 1 << end | 1 << start
        forced = -1
        w = unvisited
        while w:
            low = w & -w
            w ^= low
            u = low.bit_length() - 1
            avail = rows[u] & usable
            k = _pc(avail)
            if k < 2:
                return
            if k == 2 and avail >> end & 1 and end != start:
                if forced != -1:
                    return
                forced = u
        # remaining vertices must be reachable from the end through unvisited ones
        seen = 1 << end
        frontier = seen
        while frontier:
            nxt = 0
            for x in bits(frontier):
                nxt |= rows[x]
            frontier = nxt & unvisited & ~seen
            seen |= frontier
        if unvisited & ~seen:
            return
        if forced != -1:
            options = [forced] if rows[end] >> forced & 1 else []
        else:
            nbrs = bits(rows[end] & unvisited)
            rest = unvisited | 1 << start
            options = sorted(nbrs, key=lambda u: (_pc(rows[u] & rest), u))
        for u in options:
            path.append(u)
            yield from rec(u, unvisited & ~(1 << u))
            path.pop()

    yield from rec(start, full & ~(1 << start))


def hamilton_cycle(g: Graph, budget: Deadline | float | None = None,
                   bound: int = DEFAULT_ORACLE_BOUND) -> Cycle | None:
    """A Hamilton cycle of ``g`` or None if there is none.

    Raises BudgetExhausted when the budget runs out before a verdict, and
    CapabilityError for n above ``bound`` unless a budget is supplied.
    """
    if g.n < 3:
        raise GraphError(f"Hamilton cycle search needs n >= 3, got {g.n}")
    if g.n > bound and budget is None:
        raise CapabilityError(f"Hamilton oracle is limited to n <= {bound} without an explicit budget")
    for c in iter_hamilton_cycles(g, budget, unique=False):
        return c
    return None


def cycles_through(g: Graph, v: int, length: int, allowed: int,
                   deadline: Deadline) -> Iterator[list[int]]:
    """Simple cycles of exactly ``length`` vertices through ``v`` inside ``allowed``.

    Each undirected cycle appears once (second vertex < last vertex).
    """
    rows = g.rows
    path = [v]

    def rec(end: int, left: int, free: int) -> Iterator[list[int]]:
        deadline.check()
        if left == 0:
            if rows[end] >> v & 1 and path[1] < path[-1]:
                yield list(path)
            return
        # need a route back to v in the remaining steps
        for u in bits(rows[end] & free):
            if left == 1 and not rows[u] >> v & 1:
                continue
            path.append(u)
            yield from rec(u, left - 1, free & ~(1 << u))
            path.pop()

    if length < 3:
        return
    yield from rec(v, length - 1, allowed & ~(1 << v))

