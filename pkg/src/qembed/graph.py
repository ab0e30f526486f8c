"""Simple undirected graphs, graph distances and small-graph enumeration."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DisconnectedGraph, InvalidGraph, TooLarge

CANONICAL_MAX_N = 8
ENUMERATE_MAX_N = 6


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices ``0..n-1``.

    ``edges`` holds pairs ``(u, v)`` with ``u < v``.  Equality is labeled
    equality; use :func:`canonical_label` to compare up to isomorphism.
    """

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGraph(f"vertex count must be positive, got {self.n}")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise InvalidGraph(f"bad edge ({u}, {v}) for n={self.n}")

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        a.flags.writeable = False
        return a

    @cached_property
    def neighbors(self) -> tuple:
        nb = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def degree_sequence(self) -> list[int]:
        return sorted((len(x) for x in self.neighbors), reverse=True)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph whose vertex ``i`` is vertex ``perm[i]`` of this graph."""
        inv = [0] * self.n
        for i, p in enumerate(perm):
            inv[p] = i
        return Graph(self.n, frozenset(_pair(inv[u], inv[v]) for u, v in self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


def _pair(u, v):
    return (u, v) if u < v else (v, u)


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from an edge list; duplicate edges collapse."""
    if n < 1:
        raise InvalidGraph(f"vertex count must be positive, got {n}")
    es = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraph(f"vertex out of range in edge ({u}, {v}) for n={n}")
        if u == v:
            raise InvalidGraph(f"self-loop at vertex {u}")
        es.add(_pair(u, v))
    return Graph(n, frozenset(es))


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return graph_from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidGraph("a cycle needs at least 3 vertices")
    return graph_from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete_multipartite(parts: Sequence[int]) -> Graph:
    """Complete multipartite graph with consecutive vertex blocks of the given sizes.

    Blocks are laid out in the order given; callers wanting the conventional
    layout pass the sizes sorted non-increasing.  A single part yields the
    edgeless graph on that many vertices.
    """
    parts = [int(m) for m in parts]
    if not parts:
        raise InvalidGraph("at least one part is required")
    if any(m < 1 for m in parts):
        raise InvalidGraph(f"empty part in {parts}")
    block = []
    for i, m in enumerate(parts):
        block.extend([i] * m)
    n = len(block)
    edges = [(x, y) for x in range(n) for y in range(x + 1, n) if block[x] != block[y]]
    return graph_from_edges(n, edges)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph induced on ``vertices``, relabeled in ascending order."""
    vs = sorted(set(vertices))
    if not vs:
        raise InvalidGraph("induced subgraph needs a nonempty vertex set")
    if vs[0] < 0 or vs[-1] >= g.n:
        raise InvalidGraph(f"vertex out of range for n={g.n}")
    index = {v: i for i, v in enumerate(vs)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return graph_from_edges(len(vs), edges)


def _bfs(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in g.neighbors[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def is_connected(g: Graph) -> bool:
    return min(_bfs(g, 0)) >= 0


def bfs_distances(g: Graph) -> np.ndarray:
    """Shortest-path distance matrix as a read-only integer array."""
    rows = []
    for x in range(g.n):
        dist = _bfs(g, x)
        if min(dist) < 0:
            raise DisconnectedGraph(f"graph on {g.n} vertices is not connected")
        rows.append(dist)
    d = np.array(rows, dtype=np.int64)
    d.flags.writeable = False
    return d


def diameter(g: Graph) -> int:
    return int(bfs_distances(g).max())


def complete_multipartite_parts(g: Graph) -> tuple[int, ...] | None:
    """Part sizes (non-increasing) if ``g`` is complete multipartite with k >= 2, else None.

    A graph is complete multipartite exactly when non-adjacency is an
    equivalence relation; the parts are its classes.
    """
    seen = [False] * g.n
    parts = []
    for x in range(g.n):
        if seen[x]:
            continue
        cls = [y for y in range(g.n) if y == x or not g.has_edge(x, y)]
        for y in cls:
            if seen[y]:
                return None
            seen[y] = True
        for a, b in itertools.combinations(cls, 2):
            if g.has_edge(a, b):
                return None
        parts.append(len(cls))
    if len(parts) < 2:
        return None
    if sum(a * b for a, b in itertools.combinations(parts, 2)) != g.num_edges:
        return None
    return tuple(sorted(parts, reverse=True))


# --- canonical labeling -----------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Lexicographically minimal row-major upper-triangle bit string."""

    n: int
    bits: str

    def __str__(self):
        return f"{self.n}:{self.bits}"


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


@lru_cache(maxsize=None)
def _upper(n: int):
    iu, ju = np.triu_indices(n, k=1)
    weights = (1 << np.arange(len(iu) - 1, -1, -1, dtype=np.int64)).astype(np.int64)
    return iu, ju, weights


def _image_codes(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Integer codes of every relabeling of ``g`` (first pair is the top bit)."""
    perms = _permutations(g.n)
    iu, ju, weights = _upper(g.n)
    if len(iu) == 0:
        return np.zeros(len(perms), dtype=np.int64), perms
    bits = g.adjacency[perms[:, iu], perms[:, ju]]
    return bits @ weights, perms


def _code_from_int(n: int, value: int) -> CanonicalCode:
    m = n * (n - 1) // 2
    return CanonicalCode(n, format(int(value), f"0{m}b") if m else "")


def canonical_form(g: Graph) -> tuple[Graph, CanonicalCode]:
    """Canonical relabeling of ``g`` together with its code."""
    if g.n > CANONICAL_MAX_N:
        raise TooLarge(f"canonical labeling is capped at n={CANONICAL_MAX_N}, got {g.n}")
    codes, perms = _image_codes(g)
    best = int(np.argmin(codes))
    return g.relabel(perms[best].tolist()), _code_from_int(g.n, codes[best])


def canonical_label(g: Graph) -> CanonicalCode:
    return canonical_form(g)[1]


def graph_from_code(code: CanonicalCode) -> Graph:
    pairs = itertools.combinations(range(code.n), 2)
    return graph_from_edges(code.n, (p for p, b in zip(pairs, code.bits) if b == "1"))


def enumerate_connected(n: int) -> Iterator[Graph]:
    """One canonical representative per connected isomorphism class on ``n`` vertices.

    Walks all labeled graphs on ``n`` vertices; every labeled graph not yet
    seen starts a new class, whose whole orbit is then marked as seen.
    Representatives come out sorted by canonical code.
    """
    if n < 1:
        raise InvalidGraph(f"vertex count must be positive, got {n}")
    if n > ENUMERATE_MAX_N:
        raise TooLarge(f"enumeration is capped at n={ENUMERATE_MAX_N}, got {n}")
    pairs = list(itertools.combinations(range(n), 2))
    m = len(pairs)
    seen: set[int] = set()
    reps = []
    for mask in range(1 << m):
        if mask in seen:
            continue
        g = graph_from_edges(n, (pairs[k] for k in range(m) if mask >> (m - 1 - k) & 1))
        codes, _ = _image_codes(g)
        seen.update(codes.tolist())
        if is_connected(g):
            reps.append(int(codes.min()))
    for value in sorted(reps):
        yield graph_from_code(_code_from_int(n, value))
