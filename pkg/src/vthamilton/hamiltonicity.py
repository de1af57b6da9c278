"""Contract-and-recurse Hamilton cycle construction with explicit lifting.

Each level takes a uniform odd 2-factor of the current graph, contracts its
cycles to single vertices, solves the quotient, and lifts the quotient's
Hamilton cycle back by walking each factor cycle along its long arc. Every
assumption about the quotient (connected, odd order, vertex-transitive) is
re-checked and recorded rather than trusted.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from .budget import BudgetExhausted, Deadline
from .cycles import DEFAULT_ORACLE_BOUND, hamilton_cycle, iter_hamilton_cycles
from .factorization import (DEFAULT_GROUP_BUDGET, DEFAULT_MAX_CANDIDATES, PreconditionError,
                            UniformOddCertificate, uniform_odd_two_factor)
from .graph import Cycle, Graph, GraphError, is_connected, is_k_regular, quotient_by_partition
from .symmetry import is_vertex_transitive

__all__ = [
    "FOUND", "FACTOR_MISSING", "LIFT_FAILED", "BUDGET_EXHAUSTED",
    "LiftPlan", "ProcedureLevel", "ProcedureTrace",
    "hamilton_cycle", "hamilton_path_from_cycle", "lift_plan", "lift_hamilton_cycle", "paper_procedure",
]

FOUND = "hamilton_cycle_found"
FACTOR_MISSING = "factor_missing"
LIFT_FAILED = "lift_failed"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class LiftPlan:
    quotient_cycle: tuple[int, ...]
    splice_edges: tuple[tuple[int, int], ...]
    traversals: tuple[tuple[int, ...], ...]

    def cycle(self) -> Cycle:
        return Cycle.of(v for path in self.traversals for v in path)


def _block_cycles(cert: UniformOddCertificate) -> list[tuple[int, ...]]:
    # factor cycles are sorted by smallest vertex, which is the quotient's block order
    return [c.vertices for c in cert.factor.cycles]


def lift_plan(g: Graph, cert: UniformOddCertificate, qc: Cycle | Sequence[int] | None,
              deadline: Deadline | float | None = None) -> LiftPlan | None:
    """Splice the factor cycles along the quotient cycle ``qc``.

    A block is entered at x and left at one of x's two factor-cycle
    neighbours, walking the other way round so the whole block is covered.
    Entry vertices and directions are found by backtracking.
    """
    deadline = Deadline.coerce(deadline)
    blocks = _block_cycles(cert)
    c = len(blocks)
    if qc is None:
        if c != 1:
            raise GraphError(f"certificate has {c} cycles but no quotient cycle was given")
        return LiftPlan((0,), (), (blocks[0],))
    order = tuple(qc.vertices if isinstance(qc, Cycle) else qc)
    if sorted(order) != list(range(c)):
        raise GraphError(f"quotient cycle {order} does not visit the {c} certificate blocks once each")
    if c == 1:
        return LiftPlan((0,), (), (blocks[0],))
    pos = [{v: i for i, v in enumerate(b)} for b in blocks]
    rows = g.rows
    traversals: list[tuple[int, ...]] = []

    def walk(b: int, x: int, direction: int) -> tuple[int, ...]:
        cyc = blocks[b]
        ell = len(cyc)
        i = pos[b][x]
        return tuple(cyc[(i + direction * t) % ell] for t in range(ell))

    def rec(k: int, entry_candidates: list[int]) -> bool:
        deadline.check()
        b = order[k]
        for x in entry_candidates:
            for direction in (1, -1):
                trav = walk(b, x, direction)
                y = trav[-1]
                traversals.append(trav)
                if k == c - 1:
                    if rows[y] >> traversals[0][0] & 1:
                        return True
                else:
                    nxt = [v for v in blocks[order[k + 1]] if rows[y] >> v & 1]
                    if nxt and rec(k + 1, sorted(nxt)):
                        return True
                traversals.pop()
        return False

    if not rec(0, sorted(blocks[order[0]])):
        return None
    edges = []
    for k in range(c):
        y = traversals[k][-1]
        edges.append((y, traversals[(k + 1) % c][0]))
    return LiftPlan(order, tuple(edges), tuple(traversals))


def lift_hamilton_cycle(g: Graph, cert: UniformOddCertificate, qc: Cycle | Sequence[int] | None,
                        deadline: Deadline | float | None = None) -> Cycle | None:
    plan = lift_plan(g, cert, qc, deadline)
    return None if plan is None else plan.cycle()


def hamilton_path_from_cycle(c: Cycle) -> list[int]:
    """Drop the cycle's first edge (between its first two vertices)."""
    vs = list(c.vertices)
    return vs[1:] + vs[:1]


@dataclass(frozen=True)
class ProcedureLevel:
    graph: Graph
    certificate: UniformOddCertificate | None
    quotient: Graph | None = None
    quotient_connected: bool | None = None
    quotient_odd_order: bool | None = None
    quotient_vertex_transitive: bool | None = None
    quotient_solver: str | None = None
    notes: tuple[str, ...] = ()

    @property
    def flags(self) -> dict[str, bool | None]:
        return {
            "quotient_connected": self.quotient_connected,
            "quotient_odd_order": self.quotient_odd_order,
            "quotient_vertex_transitive": self.quotient_vertex_transitive,
        }


@dataclass(frozen=True)
class ProcedureTrace:
    levels: tuple[ProcedureLevel, ...]
    outcome: str
    cycle: Cycle | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def found(self) -> bool:
        return self.outcome == FOUND

    @property
    def hypotheses_hold(self) -> bool:
        return all(v is not False for lvl in self.levels for v in lvl.flags.values())


def _two_regular_cycle(h: Graph) -> Cycle:
    order = [0]
    prev, cur = -1, 0
    while True:
        nxt = [w for w in h.neighbors(cur) if w != prev][0]
        if nxt == 0:
            return Cycle.of(order)
        order.append(nxt)
        prev, cur = cur, nxt


class _Stop(Exception):
    def __init__(self, outcome: str, note: str = ""):
        super().__init__(outcome)
        self.outcome = outcome
        self.note = note


def paper_procedure(g: Graph, budget: Deadline | float | None = None, strategy: str = "contract",
                    group_budget: float | None = DEFAULT_GROUP_BUDGET,
                    max_candidates: int = DEFAULT_MAX_CANDIDATES,
                    check_preconditions: bool = True) -> ProcedureTrace:
    """Build a Hamilton cycle of an odd-order connected vertex-transitive graph by contraction.

    A quotient that fails one of its hypotheses is still solved, with the
    exact oracle instead of recursion, and the failure is flagged on its level.
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
    max_depth = int(math.log(n, 3) + 1e-9) + 1
    levels: list[dict] = []
    notes: list[str] = []

    def descend(h: Graph, depth: int) -> Cycle:
        if depth > max_depth:
            raise RuntimeError(f"recursion deeper than log3({n}) + 1 = {max_depth}")
        if is_k_regular(h, 2) and is_connected(h):
            return _two_regular_cycle(h)
        cert = uniform_odd_two_factor(h, deadline, strategy, group_budget, max_candidates,
                                      check_preconditions=False)
        level = {"graph": h, "certificate": cert, "notes": []}
        levels.append(level)
        if cert is None:
            raise _Stop(FACTOR_MISSING, f"no uniform odd 2-factor at level {depth}")
        if cert.cycle_count == 1:
            return cert.factor.cycles[0]
        q = quotient_by_partition(h, cert.factor.partition(h.n))
        level["quotient"] = q
        level["quotient_connected"] = is_connected(q)
        level["quotient_odd_order"] = q.n % 2 == 1
        level["quotient_vertex_transitive"] = is_vertex_transitive(q, deadline=deadline)
        if level["quotient_connected"] and level["quotient_odd_order"] and level["quotient_vertex_transitive"]:
            level["quotient_solver"] = "recursion"
            qcycle = descend(q, depth + 1)
        else:
            level["quotient_solver"] = "oracle"
            level["notes"].append("quotient hypothesis violated; solved by exact search")
            qcycle = hamilton_cycle(q, deadline, bound=max(DEFAULT_ORACLE_BOUND, q.n))
            if qcycle is None:
                raise _Stop(LIFT_FAILED, f"quotient at level {depth} has no Hamilton cycle")
        lifted = lift_hamilton_cycle(h, cert, qcycle, deadline)
        if lifted is None:
            for alt in iter_hamilton_cycles(q, deadline):
                lifted = lift_hamilton_cycle(h, cert, alt, deadline)
                if lifted is not None:
                    level["notes"].append("lifted along an alternative quotient Hamilton cycle")
                    break
        if lifted is None:
            raise _Stop(LIFT_FAILED, f"no quotient Hamilton cycle lifts at level {depth}")
        return lifted

    cycle = None
    try:
        cycle = descend(g, 0)
        outcome = FOUND
    except _Stop as stop:
        outcome = stop.outcome
        notes.append(stop.note)
    except BudgetExhausted as exc:
        outcome = BUDGET_EXHAUSTED
        notes.append(str(exc))
    if cycle is not None and not cycle.is_hamiltonian_in(g):
        raise RuntimeError(f"procedure produced an invalid cycle {cycle.vertices}")
    frozen = tuple(
        ProcedureLevel(
            graph=lv["graph"],
            certificate=lv["certificate"],
            quotient=lv.get("quotient"),
            quotient_connected=lv.get("quotient_connected"),
            quotient_odd_order=lv.get("quotient_odd_order"),
            quotient_vertex_transitive=lv.get("quotient_vertex_transitive"),
            quotient_solver=lv.get("quotient_solver"),
            notes=tuple(lv["notes"]),
        )
        for lv in levels
    )
    return ProcedureTrace(frozen, outcome, cycle, tuple(notes))
