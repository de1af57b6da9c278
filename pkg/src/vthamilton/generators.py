"""Vertex-transitive graph families: circulants, Cayley graphs, Kneser graphs.

Group multiplication tables are plain text: the order n, then n*n integers
row-major, where entry (i, j) is the index of element_i * element_j.
Lines starting with '#' are comments. Bundled tables live in data/groups.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import Graph, GraphError, make_graph


def gen_circulant(n: int, steps) -> Graph:
    if n < 3:
        raise GraphError(f"circulant needs n >= 3, got {n}")
    steps = sorted(set(steps))
    for d in steps:
        if not 0 < d < n:
            raise GraphError(f"circulant step {d} not in 1..{n - 1}")
    return make_graph(n, [(v, (v + d) % n) for v in range(n) for d in steps])


def gen_kneser(n: int, k: int) -> Graph:
    if k < 1 or n < 2 * k + 1:
        raise GraphError(f"Kneser graph K({n}, {k}) needs k >= 1 and n >= 2k + 1")
    subsets = [frozenset(s) for s in itertools.combinations(range(1, n + 1), k)]
    edges = [(i, j) for i in range(len(subsets)) for j in range(i + 1, len(subsets))
             if not subsets[i] & subsets[j]]
    return make_graph(len(subsets), edges)


@dataclass(frozen=True)
class GroupTable:
    name: str
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def identity(self) -> int:
        n = self.order
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                return e
        raise GraphError(f"group table {self.name} has no identity")

    def inverse(self, x: int) -> int:
        e = self.identity()
        for y in range(self.order):
            if self.table[x][y] == e and self.table[y][x] == e:
                return y
        raise GraphError(f"element {x} of {self.name} has no inverse")

    def validate(self):
        n = self.order
        if n < 1 or any(len(row) != n for row in self.table):
            raise GraphError(f"group table {self.name} is not square")
        for row in self.table:
            for z in row:
                if not 0 <= z < n:
                    raise GraphError(f"group table {self.name} not closed: entry {z}")
        e = self.identity()
        for x in range(n):
            if sorted(self.table[x]) != list(range(n)):
                raise GraphError(f"row {x} of {self.name} is not a permutation")
            self.inverse(x)
        t = self.table
        for x in range(n):
            for y in range(n):
                xy = t[x][y]
                for z in range(n):
                    if t[xy][z] != t[x][t[y][z]]:
                        raise GraphError(f"group table {self.name} is not associative at ({x}, {y}, {z})")
        return e

    def inverse_classes(self) -> list[tuple[int, ...]]:
        """Non-identity elements grouped with their inverses, ordered by smallest member."""
        e = self.identity()
        seen = set()
        out = []
        for x in range(self.order):
            if x == e or x in seen:
                continue
            cls = tuple(sorted({x, self.inverse(x)}))
            seen.update(cls)
            out.append(cls)
        return out


def cyclic_group(n: int) -> GroupTable:
    return GroupTable(f"Z{n}", tuple(tuple((x + y) % n for y in range(n)) for x in range(n)))


def direct_product(a: GroupTable, b: GroupTable) -> GroupTable:
    """Element (x, y) sits at index x * |b| + y."""
    m = b.order
    n = a.order * m
    rows = []
    for i in range(n):
        x1, y1 = divmod(i, m)
        rows.append(tuple(a.mul(x1, j // m) * m + b.mul(y1, j % m) for j in range(n)))
    return GroupTable(f"{a.name}x{b.name}", tuple(rows))


def parse_group_table(text: str, name: str = "group") -> GroupTable:
    numbers = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        numbers.extend(int(tok) for tok in line.split())
    if not numbers:
        raise GraphError(f"group table {name} is empty")
    n = numbers[0]
    body = numbers[1:]
    if len(body) != n * n:
        raise GraphError(f"group table {name}: expected {n * n} entries, found {len(body)}")
    g = GroupTable(name, tuple(tuple(body[i * n:(i + 1) * n]) for i in range(n)))
    g.validate()
    return g


def load_group_table(path) -> GroupTable:
    path = Path(path)
    return parse_group_table(path.read_text(), path.stem)


def bundled_groups() -> list[str]:
    root = resources.files("vthamilton") / "data" / "groups"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".txt"))


def group_by_name(name: str) -> GroupTable:
    """'Z<n>' is cyclic, 'AxB' a direct product, anything else a bundled table."""
    root = resources.files("vthamilton") / "data" / "groups"
    bundled = root / f"{name}.txt"
    if bundled.is_file():
        return parse_group_table(bundled.read_text(), name)
    m = re.fullmatch(r"Z(\d+)", name)
    if m:
        return cyclic_group(int(m.group(1)))
    if "x" in name:
        left, right = name.split("x", 1)
        return direct_product(group_by_name(left), group_by_name(right))
    raise GraphError(f"unknown group {name!r}; bundled tables: {bundled_groups()}")


def gen_cayley(table: GroupTable, conn) -> Graph:
    """Vertices are group elements, x joined to x*s for every s in ``conn``."""
    table.validate()
    conn = sorted(set(conn))
    e = table.identity()
    for s in conn:
        if not 0 <= s < table.order:
            raise GraphError(f"connection element {s} outside the group")
        if s == e:
            raise GraphError("connection set contains the identity")
        if table.inverse(s) not in conn:
            raise GraphError(f"connection set not closed under inverses: {s}^-1 = {table.inverse(s)} missing")
    return make_graph(table.order, [(x, table.mul(x, s)) for x in range(table.order) for s in conn])
