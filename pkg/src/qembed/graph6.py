"""graph6 encoding and decoding.

Layout: ``N(n)`` followed by the upper triangle of the adjacency matrix in
column order x(0,1), x(0,2), x(1,2), x(0,3), ..., packed six bits per byte
(most significant first), zero padded, each group offset by 63.
"""

from __future__ import annotations

import logging
from typing import Iterable, Iterator, NamedTuple, TextIO

from .errors import InputError
from .graph import Graph, graph_from_edges

log = logging.getLogger(__name__)

HEADER = ">>graph6<<"
MAX_N = 258047


class Graph6Error(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidByte(Graph6Error):
    pass


class TruncatedBits(Graph6Error):
    pass


class TrailingGarbage(Graph6Error):
    pass


class NonzeroPadding(Graph6Error):
    pass


class UnsupportedFormat(Graph6Error):
    pass


class Graph6Record(NamedTuple):
    raw: str
    graph: Graph
    line: int | None = None


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= MAX_N:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise Graph6Error(f"n={n} exceeds the supported graph6 size {MAX_N}")


def _triangle(n):
    for j in range(1, n):
        for i in range(j):
            yield i, j


def write_graph6(g: Graph) -> str:
    bits = [1 if (i, j) in g.edges else 0 for i, j in _triangle(g.n)]
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        body.append(chr(v + 63))
    return _encode_n(g.n) + "".join(body)


def _detect_other_format(s: str):
    if s.startswith(":") or s.startswith(">>sparse6<<"):
        return "sparse6"
    if s.startswith(";"):
        return "incremental sparse6"
    if s.startswith("&") or s.startswith(">>digraph6<<"):
        return "digraph6"
    return None


def parse_graph6(line: str, *, lenient: bool = False) -> Graph:
    """Decode one graph6 string (an optional ``>>graph6<<`` prefix is allowed).

    With ``lenient=True`` nonzero padding bits are ignored instead of rejected.
    """
    s = line.strip("\r\n")
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    other = _detect_other_format(s)
    if other:
        raise UnsupportedFormat(f"{other} input is not supported, only graph6")
    if not s:
        raise TruncatedBits("empty graph6 string")
    data = []
    for pos, ch in enumerate(s):
        v = ord(ch)
        if not 63 <= v <= 126:
            raise InvalidByte(f"byte {v!r} at position {pos} is outside 63..126")
        data.append(v - 63)

    if data[0] < 63:
        n, body = data[0], data[1:]
    elif len(data) >= 2 and data[1] == 63:
        raise Graph6Error("graph6 sizes beyond 258047 vertices are not supported")
    else:
        if len(data) < 4:
            raise TruncatedBits("truncated 4-byte vertex count")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        if n < 63:
            raise Graph6Error(f"non-canonical 4-byte vertex count {n}")
        body = data[4:]
    if n == 0:
        raise Graph6Error("graph6 string encodes a graph with no vertices")

    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    if len(body) < need:
        raise TruncatedBits(f"need {need} body bytes for n={n}, got {len(body)}")
    if len(body) > need:
        raise TrailingGarbage(f"{len(body) - need} unexpected bytes after the graph body")

    edges = set()
    k = 0
    for i, j in _triangle(n):
        if body[k // 6] >> (5 - k % 6) & 1:
            edges.add((i, j))
        k += 1
    if not lenient and need:
        pad = need * 6 - nbits
        if body[-1] & ((1 << pad) - 1):
            raise NonzeroPadding("padding bits are not zero")
    return Graph(n, frozenset(edges))


def iter_graph6_records(lines: Iterable[str], *, skip_errors: bool = False,
                        diagnostics: list | None = None,
                        lenient: bool = False) -> Iterator[Graph6Record]:
    """Decode newline-delimited graph6 records lazily.

    Blank lines are skipped.  A ``>>graph6<<`` header is accepted only on the
    first non-blank line, either alone or glued to the first record.  Errors
    carry the 1-based line number; in skip mode they are logged, appended to
    ``diagnostics`` if given, and decoding continues.
    """
    first = True
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s:
            continue
        try:
            if first and s.startswith(HEADER):
                s = s[len(HEADER):]
                if not s:
                    first = False
                    continue
            elif s.startswith(HEADER):
                raise Graph6Error("graph6 header is only allowed on the first line")
            first = False
            g = parse_graph6(s, lenient=lenient)
        except Graph6Error as exc:
            first = False
            err = type(exc)(str(exc), line=lineno)
            if not skip_errors:
                raise err from exc
            log.warning("skipping record: %s", err)
            if diagnostics is not None:
                diagnostics.append(err)
            continue
        yield Graph6Record(s, g, lineno)


def read_graph6_stream(source: TextIO | Iterable[str], **kwargs) -> Iterator[Graph]:
    for rec in iter_graph6_records(source, **kwargs):
        yield rec.graph


def read_edge_list(text: str) -> Graph:
    """Parse the edge-list format: ``n m`` then ``m`` lines ``u v`` (0-based)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise InputError("edge list must start with a line 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(r[0]), int(r[1])) for r in rows[1:] if len(r) == 2]
    except ValueError as exc:
        raise InputError(f"edge list: {exc}") from None
    if any(len(r) != 2 for r in rows[1:]):
        raise InputError("edge list lines must contain exactly two vertices")
    if len(edges) != m:
        raise InputError(f"edge list declares {m} edges but lists {len(edges)}")
    return graph_from_edges(n, edges)
