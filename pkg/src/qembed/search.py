"""Isometric subgraph search and scans for primary non-QE graphs."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraph, TooLarge
from .graph import (
    CANONICAL_MAX_N,
    ENUMERATE_MAX_N,
    Graph,
    bfs_distances,
    canonical_form,
    complete_multipartite,
    enumerate_connected,
    induced_subgraph,
    is_connected,
)
from .graph6 import write_graph6
from .spectral import qec_numeric

NON_QE_THRESHOLD = 1e-9
POLY_TOL = 1e-7
SQRT19_TOL = 1e-9


@dataclass(frozen=True)
class IsometricWitness:
    mapping: tuple  # mapping[x] is the image in G of vertex x of H

    def is_valid(self, h: Graph, g: Graph) -> bool:
        dh, dg = bfs_distances(h), bfs_distances(g)
        idx = np.array(self.mapping)
        return len(set(self.mapping)) == h.n and np.array_equal(dh, dg[np.ix_(idx, idx)])


def find_isometric_embedding(h: Graph, g: Graph) -> IsometricWitness | None:
    """First distance-preserving injective map from ``h`` into ``g``, or None.

    Vertices of ``h`` are placed in descending-degree order and tried against
    images in ascending label order, so the witness is deterministic.  When
    ``h`` has diameter at most 2 only adjacency has to be preserved, because an
    induced copy of such a graph is automatically isometric.
    """
    if not is_connected(h) or not is_connected(g):
        raise DisconnectedGraph("isometric embedding needs connected graphs")
    if h.n > g.n:
        return None
    dh, dg = bfs_distances(h), bfs_distances(g)
    if dh.max() <= 2:
        dh = np.minimum(dh, 2)
        dg = np.minimum(dg, 2)
    order = sorted(range(h.n), key=lambda x: (-h.degree(x), x))
    deg_g = [g.degree(y) for y in range(g.n)]
    image = [-1] * h.n
    used = [False] * g.n

    def extend(pos):
        if pos == h.n:
            return True
        x = order[pos]
        for y in range(g.n):
            if used[y] or deg_g[y] < h.degree(x):
                continue
            if all(dh[x, order[j]] == dg[y, image[order[j]]] for j in range(pos)):
                image[x] = y
                used[y] = True
                if extend(pos + 1):
                    return True
                used[y] = False
                image[x] = -1
        return False

    if extend(0):
        return IsometricWitness(tuple(image))
    return None


# --- scans ------------------------------------------------------------------


@dataclass
class Witness:
    vertices: tuple
    graph6: str            # canonical form of the embedded subgraph
    canonical_code: str
    qec: float


@dataclass
class ScanRecord:
    graph6: str
    n: int
    edges: list
    degree_sequence: list
    qec: float
    qe_class: str
    primary: bool | None
    witnesses: list = field(default_factory=list)
    method: str = "eigen"
    residual: float = 0.0
    canonical_code: str = ""

    @property
    def non_qe(self) -> bool:
        return self.qe_class == "non-QE"

    def contains(self, code: str) -> bool:
        return any(w.canonical_code == code for w in self.witnesses)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["class"] = d.pop("qe_class")
        d["edges"] = [list(e) for e in self.edges]
        d["witnesses"] = [dict(w, vertices=list(w["vertices"])) for w in d["witnesses"]]
        return {k: d[k] for k in SCAN_FIELDS}


SCAN_FIELDS = ("graph6", "n", "edges", "degree_sequence", "qec", "class", "primary",
               "witnesses", "method", "residual", "canonical_code")


@dataclass
class ScanReport:
    records: list

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def non_qe(self) -> list:
        return [r for r in self.records if r.non_qe]

    @property
    def primary(self) -> list:
        return [r for r in self.records if r.primary]

    def summary(self) -> dict:
        return {"total": self.total, "non_qe": len(self.non_qe), "primary": len(self.primary)}


def _clean(x: float) -> float:
    return 0.0 if x == 0 else float(x)


@lru_cache(maxsize=4096)
def _qec_of_code(n: int, canonical_edges: frozenset) -> float:
    return qec_numeric(bfs_distances(Graph(n, canonical_edges))).value


def _non_qe_witnesses(g: Graph, dg: np.ndarray) -> list:
    out = []
    for size in range(2, g.n):
        for sub in itertools.combinations(range(g.n), size):
            h = induced_subgraph(g, sub)
            if not is_connected(h):
                continue
            idx = np.array(sub)
            if not np.array_equal(bfs_distances(h), dg[np.ix_(idx, idx)]):
                continue
            canon, code = canonical_form(h)
            q = _qec_of_code(canon.n, canon.edges)
            if q > NON_QE_THRESHOLD:
                out.append(Witness(sub, write_graph6(canon), code.bits, _clean(q)))
    return out


def scan_record(g: Graph, primary: bool = False) -> ScanRecord:
    """QE data for one graph; with ``primary`` also the non-QE isometric subgraphs.

    Any isometric subgraph is induced, so enumerating vertex subsets and
    checking distance preservation of the inclusion finds all of them.
    """
    if g.n > CANONICAL_MAX_N:
        raise TooLarge(f"scan records are capped at n={CANONICAL_MAX_N}, got {g.n}")
    d = bfs_distances(g)
    res = qec_numeric(d) if g.n >= 2 else None
    q = _clean(res.value) if res else 0.0
    non_qe = q > NON_QE_THRESHOLD
    rec = ScanRecord(
        graph6=write_graph6(g),
        n=g.n,
        edges=g.sorted_edges(),
        degree_sequence=g.degree_sequence(),
        qec=q,
        qe_class="non-QE" if non_qe else "QE",
        primary=None,
        residual=_clean(res.residual) if res else 0.0,
        canonical_code=canonical_form(g)[1].bits,
    )
    if primary:
        rec.witnesses = _non_qe_witnesses(g, d) if non_qe else []
        rec.primary = non_qe and not rec.witnesses
    return rec


def _scan_record_args(args):
    return scan_record(*args)


def scan_graphs(graphs: Iterable[Graph], primary: bool = False, jobs: int = 1) -> ScanReport:
    graphs = list(graphs)
    if jobs > 1 and len(graphs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            recs = list(pool.map(_scan_record_args, [(g, primary) for g in graphs], chunksize=8))
    else:
        recs = [scan_record(g, primary) for g in graphs]
    return ScanReport(recs)


def _check_n(n: int):
    if n < 2:
        raise TooLarge(f"scans need n >= 2, got {n}")
    if n > ENUMERATE_MAX_N:
        raise TooLarge(f"built-in scans are capped at n={ENUMERATE_MAX_N}, got {n}")


def non_qe_scan(n: int, jobs: int = 1) -> ScanReport:
    _check_n(n)
    return scan_graphs(enumerate_connected(n), primary=False, jobs=jobs)


def primary_scan(n: int, jobs: int = 1) -> ScanReport:
    _check_n(n)
    return scan_graphs(enumerate_connected(n), primary=True, jobs=jobs)


# --- closed-form checks for the three primary six-vertex graphs -------------

SQRT19_TAG = "(-4+sqrt(19))/3"
CUBIC_TAG = "5x^3+26x^2+24x-6"
QUARTIC_TAG = "3x^4+14x^3+18x^2+5x-1"
# the primary graph EBn_ has restricted characteristic factor 3x^3+13x^2+12x-3,
# which is this cubic halved
CUBIC6_TAG = "6x^3+26x^2+24x-6"

_POLYS = {
    CUBIC_TAG: (5, 26, 24, -6),
    QUARTIC_TAG: (3, 14, 18, 5, -1),
    CUBIC6_TAG: (6, 26, 24, -6),
}


def primary_polynomial_check(qec_value: float) -> str | None:
    """Tag of the closed form or polynomial whose positive root is ``qec_value``."""
    if abs(qec_value - (-4 + math.sqrt(19)) / 3) <= SQRT19_TOL:
        return SQRT19_TAG
    for tag, coeffs in _POLYS.items():
        if abs(np.polyval(coeffs, qec_value)) <= POLY_TOL:
            return tag
    return None


def positive_root(tag: str) -> float:
    """The unique positive real root of the tagged polynomial (or the closed form)."""
    if tag == SQRT19_TAG:
        return (-4 + math.sqrt(19)) / 3
    roots = np.roots(_POLYS[tag])
    pos = [r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0]
    if len(pos) != 1:
        raise ValueError(f"{tag} has {len(pos)} positive roots")
    return pos[0]


# --- known primary non-QE graphs --------------------------------------------

SMALL_PRIMARIES_G6 = ("DFw", "DNw", "E@v_", "EBn_", "EBzw")


def known_primaries() -> dict:
    """Primary non-QE graphs on 5 and 6 vertices plus the complete multipartite ones."""
    from .graph6 import parse_graph6
    from .multipartite import PRIMARY_PARTS

    out = {g6: parse_graph6(g6) for g6 in SMALL_PRIMARIES_G6}
    for tag, parts in PRIMARY_PARTS.items():
        h = complete_multipartite(parts)
        out.pop(write_graph6(canonical_form(h)[0]), None)
        out[tag] = h
    return out


def contained_primaries(g: Graph) -> frozenset:
    """Tags of the known primary non-QE graphs that embed isometrically in ``g``."""
    return frozenset(tag for tag, h in known_primaries().items()
                     if h.n <= g.n and find_isometric_embedding(h, g) is not None)
