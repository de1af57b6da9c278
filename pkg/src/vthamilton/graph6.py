"""graph6 text encoding (one graph per line).

Format: N(n) followed by the upper triangle of the adjacency matrix, column
by column (x(0,1), x(0,2), x(1,2), x(0,3), ...), packed big-endian into
6-bit groups, each group offset by 63 into printable ASCII.
"""

from __future__ import annotations

from .graph import Graph, GraphError

HEADER = ">>graph6<<"


class Graph6Error(GraphError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr((n >> s & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr((n >> s & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    bitseq = []
    for j in range(1, g.n):
        row = g.rows[j]
        for i in range(j):
            bitseq.append(row >> i & 1)
    bitseq += [0] * (-len(bitseq) % 6)
    body = []
    for k in range(0, len(bitseq), 6):
        val = 0
        for b in bitseq[k:k + 6]:
            val = val << 1 | b
        body.append(chr(val + 63))
    return _encode_n(g.n) + "".join(body)


def _sextet(text: str, pos: int) -> int:
    c = ord(text[pos])
    if not 63 <= c <= 126:
        raise Graph6Error(f"invalid graph6 character {text[pos]!r}", pos)
    return c - 63


def parse_graph6(text: str) -> Graph:
    line = text.rstrip("\r\n")
    start = len(HEADER) if line.startswith(HEADER) else 0
    if start >= len(line):
        raise Graph6Error("empty graph6 string", start)
    pos = start
    if line[pos] == "~":
        if pos + 1 < len(line) and line[pos + 1] == "~":
            width, pos = 6, pos + 2
        else:
            width, pos = 3, pos + 1
        if pos + width > len(line):
            raise Graph6Error("truncated vertex count", len(line))
        n = 0
        for k in range(width):
            n = n << 6 | _sextet(line, pos + k)
        pos += width
    else:
        n = _sextet(line, pos)
        pos += 1
    if n == 0:
        raise Graph6Error("graph6 with zero vertices is not supported", start)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    have = len(line) - pos
    if have != need:
        raise Graph6Error(f"expected {need} data bytes for n={n}, found {have}", pos + min(have, need))
    rows = [0] * n
    k = 0
    i, j = 0, 1
    for off in range(need):
        val = _sextet(line, pos + off)
        for s in range(5, -1, -1):
            if k >= nbits:
                if val >> s & 1:
                    raise Graph6Error("nonzero padding bit", pos + off)
                continue
            if val >> s & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, tuple(rows))


def read_graph6_file(path) -> list[Graph]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(parse_graph6(line))
    return out
