"""QE constants and non-QE classification of complete multipartite graphs.

For K_{m1,...,mk} with m1 >= ... >= mk the QE constant is -2 + m1 when the two
largest parts agree.  Otherwise it is -2 - a*, where a* is the smallest root
of psi(a) = sum_i m_i / (a + m_i); that root lies strictly between -m1 and -m2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NotAStationaryAlpha, PartitionError, PoleHit, PreconditionViolated

ROOT_WIDTH_TOL = 1e-13
ROOT_PSI_TOL = 1e-12
STATIONARY_PSI_TOL = 1e-9

PRIMARY_PARTS = {
    "K_{3,2}": (3, 2),
    "K_{5,1,1}": (5, 1, 1),
    "K_{4,1,1,1}": (4, 1, 1, 1),
    "K_{3,1,1,1,1}": (3, 1, 1, 1, 1),
}


@dataclass(frozen=True)
class Partition:
    """Part sizes of a complete multipartite graph, stored non-increasing."""

    parts: tuple

    def __init__(self, parts: Iterable[int]):
        ps = tuple(sorted((int(m) for m in parts), reverse=True))
        if not ps:
            raise PartitionError("a partition needs at least one part")
        if ps[-1] < 1:
            raise PartitionError(f"parts must be positive, got {ps}")
        object.__setattr__(self, "parts", ps)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def order(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self):
        return "K_{" + ",".join(map(str, self.parts)) + "}"


def as_partition(parts) -> Partition:
    return parts if isinstance(parts, Partition) else Partition(parts)


def _multi(parts) -> Partition:
    p = as_partition(parts)
    if p.k < 2:
        raise PartitionError(f"need at least two parts, got {p.parts}")
    return p


def parse_partition(text: str) -> Partition:
    """Parse ``"4,1,1,1"`` or the repetition shorthand ``"2^4"`` (mixable: ``"3,1^4"``)."""
    parts = []
    for tok in text.replace(" ", "").split(","):
        m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
        if not m:
            raise PartitionError(f"cannot parse part {tok!r} in {text!r}")
        size, rep = int(m.group(1)), int(m.group(2) or 1)
        if size < 1 or rep < 1:
            raise PartitionError(f"parts and repetitions must be positive in {text!r}")
        parts.extend([size] * rep)
    return Partition(parts)


def psi(alpha: float, parts) -> float:
    p = as_partition(parts)
    if any(alpha + m == 0 for m in p):
        raise PoleHit(f"alpha={alpha} is a pole of psi for {p}")
    return sum(m / (alpha + m) for m in p)


def minimal_root(parts) -> float:
    """Smallest root of psi, found by bisection on (-m1, -m2)."""
    p = _multi(parts)
    m1, m2 = p[0], p[1]
    if m1 == m2:
        raise PreconditionViolated(f"minimal_root needs m1 > m2, got {p}")
    # psi is decreasing on the bracket: +inf just right of -m1, -inf just left of -m2
    delta = 1e-9 * m1
    while True:
        lo, hi = -m1 + delta, -m2 - delta
        if psi(lo, p) > 0 and psi(hi, p) < 0:
            break
        delta /= 16
        if delta < 1e-300:
            raise PreconditionViolated(f"could not bracket the root of psi for {p}")
    while hi - lo > ROOT_WIDTH_TOL:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = psi(mid, p)
        if v == 0:
            return mid
        if v > 0:
            lo = mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    return mid


@dataclass(frozen=True)
class QecClosedForm:
    value: float
    branch: str                      # "equal-top" or "root"
    alpha_star: float | None = None
    exact: Fraction | None = None    # set whenever the value is a known rational
    psi_residual: float | None = None


def _exact_rational(p: Partition) -> Fraction | None:
    if p[0] == p[1]:
        return Fraction(p[0] - 2)
    if p.k == 2:
        return qec_bipartite_exact(p[0], p[1])
    if all(m == 1 for m in p.parts[1:]):
        return qec_complete_split_exact(p[0], p.k - 1)
    return None


def qec_multipartite(parts) -> QecClosedForm:
    p = _multi(parts)
    exact = _exact_rational(p)
    if p[0] == p[1]:
        return QecClosedForm(float(p[0] - 2), "equal-top", None, exact)
    # a known rational fixes the sign exactly, e.g. K_{4,1,1} sits at QEC = 0
    if exact is not None:
        a = float(-2 - exact)
        return QecClosedForm(float(exact), "root", a, exact, abs(psi(a, p)))
    a = minimal_root(p)
    return QecClosedForm(-2.0 - a, "root", a, exact, abs(psi(a, p)))


def qec_bipartite_exact(m: int, n: int) -> Fraction:
    return Fraction(2 * (m - 1) * (n - 1) - 2, m + n)


def qec_bipartite(m: int, n: int) -> float:
    return float(qec_bipartite_exact(m, n))


def qec_tripartite(l: int, m: int, n: int) -> float:
    s2 = l * m + m * n + n * l
    s1 = l + m + n
    disc = s2 * s2 - 3 * l * m * n * s1  # exact integer, never negative
    return -2.0 + (s2 + math.sqrt(disc)) / s1


def qec_complete_split_exact(m: int, n: int) -> Fraction:
    return Fraction((m - 2) * (n - 1) - 2, m + n)


def qec_complete_split(m: int, n: int) -> float:
    """QE constant of the join of an edgeless graph on m vertices with K_n."""
    return float(qec_complete_split_exact(m, n))


def qec_cocktail_party(n: int) -> float:
    if n < 2:
        raise PartitionError(f"cocktail party graph needs n >= 2, got {n}")
    return 0.0


def non_qe_condition(parts) -> str | None:
    """Which of the four integer conditions for non-QE class holds, if any.

    Returns ``"i"`` for m1 >= 3 and m2 >= 2, and ``"ii"``/``"iii"``/``"iv"``
    for the complete split families with m1 >= 5 (k >= 3), m1 = 4 (k >= 4)
    and m1 = 3 (k >= 5).  The conditions are mutually exclusive.
    """
    p = _multi(parts)
    m1, m2, k = p[0], p[1], p.k
    if m1 >= 3 and m2 >= 2:
        return "i"
    if m2 == 1:  # then all remaining parts are 1
        if k >= 3 and m1 >= 5:
            return "ii"
        if k >= 4 and m1 == 4:
            return "iii"
        if k >= 5 and m1 == 3:
            return "iv"
    return None


def classify_non_qe(parts) -> bool:
    return non_qe_condition(parts) is not None


def dominates(big, small) -> bool:
    """Whether K_small embeds isometrically in K_big by part-wise domination."""
    b, s = as_partition(big).parts, as_partition(small).parts
    # both sorted non-increasing, so a dominating subsequence exists iff the prefix does
    return len(s) <= len(b) and all(x <= y for x, y in zip(s, b))


def contains_primary(parts) -> frozenset:
    p = _multi(parts)
    return frozenset(tag for tag, q in PRIMARY_PARTS.items() if dominates(p, q))


@dataclass(frozen=True)
class StationarySolution:
    xi: tuple
    alpha: float
    beta: float

    def block_vector(self, parts) -> np.ndarray:
        p = as_partition(parts)
        return np.concatenate([np.full(m, x) for m, x in zip(p, self.xi)])

    def residuals(self, parts) -> dict:
        p = as_partition(parts)
        xi = np.array(self.xi)
        m = np.array(p.parts, dtype=float)
        return {
            "lagrange": float(np.max(np.abs((m + self.alpha) * xi + self.beta / 2))),
            "norm": float(abs(np.sum(m * xi * xi) - 1.0)),
            "balance": float(abs(np.sum(m * xi))),
        }


def stationary_solution(parts, alpha: float) -> StationarySolution:
    """Stationary point of the reduced Lagrange system with multiplier ``alpha``.

    For a root of psi, xi_i = -(beta/2) / (alpha + m_i) with the positive beta
    that normalizes sum m_i xi_i^2 = 1.  The equal-top case alpha = -m1 with
    m1 = m2 has the separate solution xi = (1, -1, 0, ...) / sqrt(2 m1), beta = 0.
    """
    p = _multi(parts)
    if alpha == -p[0] and p[0] == p[1]:
        x = 1.0 / math.sqrt(2 * p[0])
        return StationarySolution((x, -x) + (0.0,) * (p.k - 2), float(alpha), 0.0)
    value = psi(alpha, p)
    if abs(value) > STATIONARY_PSI_TOL:
        raise NotAStationaryAlpha(f"psi({alpha}) = {value:.3g} is not zero for {p}")
    s = sum(m / (alpha + m) ** 2 for m in p)
    beta = 2.0 / math.sqrt(s)
    xi = tuple(-(beta / 2) / (alpha + m) for m in p)
    return StationarySolution(xi, float(alpha), beta)
