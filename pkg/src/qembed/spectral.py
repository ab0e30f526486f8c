"""Dense symmetric eigenproblems, the numeric QE constant and quadratic embeddings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DiameterOutOfRange, InputError, NotEmbeddable
from .graph import Graph, bfs_distances

JACOBI_TOL = 1e-11
JACOBI_MAX_SWEEPS = 100
EMBED_TOL = 1e-9


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # columns aligned with eigenvalues


@dataclass(frozen=True)
class QecResult:
    value: float
    method: str
    certificate: np.ndarray | None = field(default=None, compare=False)
    residual: float | None = None


@dataclass(frozen=True)
class EmbeddingCoords:
    points: np.ndarray  # shape (n, dim)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _as_symmetric(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise InputError("matrix is not symmetric")
    return a


def sym_eigen(m, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> Spectrum:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius norm drops below
    ``tol`` times the Frobenius norm of the input.
    """
    a = _as_symmetric(m)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if scale == 0.0 or n == 1:
        return Spectrum(np.diag(a).copy(), v)

    def off(x):
        return np.linalg.norm(x - np.diag(np.diag(x)))

    for _ in range(max_sweeps):
        if off(a) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        if off(a) > tol * scale:
            raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def ones_complement_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n x n-1) of the hyperplane orthogonal to the all-ones vector.

    Columns 2..n of the Householder reflection that swaps the first axis with
    the normalized all-ones vector.
    """
    if n < 2:
        raise InputError("the all-ones complement needs n >= 2")
    w = -np.full(n, 1.0 / np.sqrt(n))
    w[0] += 1.0
    h = np.eye(n) - 2.0 * np.outer(w, w) / (w @ w)
    return h[:, 1:]


def restrict_to_ones_complement(m) -> np.ndarray:
    a = _as_symmetric(m)
    b = ones_complement_basis(a.shape[0])
    r = b.T @ a @ b
    return (r + r.T) / 2.0


def _normalize_sign(f: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(f) > 1e-12)
    if nz.size and f[nz[0]] < 0:
        return -f
    return f


def qec_numeric(d) -> QecResult:
    """Maximum of <f, D f> over unit vectors f orthogonal to the all-ones vector."""
    dm = _as_symmetric(d)
    n = dm.shape[0]
    b = ones_complement_basis(n)
    spec = sym_eigen(restrict_to_ones_complement(dm))
    value = float(spec.eigenvalues[0])
    f = b @ spec.eigenvectors[:, 0]
    f = _normalize_sign(f / np.linalg.norm(f))
    # Lagrange condition on the hyperplane: D f - value f is parallel to the ones vector
    r = dm @ f - value * f
    residual = float(np.linalg.norm(r - r.mean()))
    return QecResult(value, "eigen", f, residual)


def alpha_min_numeric(g: Graph) -> float:
    """Minimum of <f, A f> over unit f orthogonal to all-ones, for graphs of diameter 1 or 2."""
    d = bfs_distances(g)
    diam = int(d.max())
    if not 1 <= diam <= 2:
        raise DiameterOutOfRange(f"diameter {diam} is outside 1..2")
    return float(sym_eigen(restrict_to_ones_complement(g.adjacency)).eigenvalues[-1])


def distance_spectrum(d) -> Spectrum:
    return sym_eigen(d)


def gram_matrix(d) -> np.ndarray:
    dm = _as_symmetric(d)
    n = dm.shape[0]
    p = np.eye(n) - np.full((n, n), 1.0 / n)
    g = -0.5 * p @ dm @ p
    return (g + g.T) / 2.0


def quadratic_embedding(d, tol: float = EMBED_TOL) -> EmbeddingCoords:
    """Points whose squared Euclidean distances reproduce ``d``.

    Raises NotEmbeddable when the centered Gram matrix has an eigenvalue
    below ``-tol * ||G||``.
    """
    g = gram_matrix(d)
    spec = sym_eigen(g)
    w, v = spec.eigenvalues, spec.eigenvectors
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    if w.size and w[-1] < -tol * norm:
        q = qec_numeric(d).value if g.shape[0] >= 2 else None
        raise NotEmbeddable(f"distance matrix is not conditionally negative definite (QEC = {q:.12g})", qec=q)
    keep = w > tol * norm
    pts = v[:, keep] * np.sqrt(np.clip(w[keep], 0.0, None))
    return EmbeddingCoords(pts)


def embedding_residual(coords: EmbeddingCoords, d) -> float:
    dm = np.asarray(d, dtype=float)
    if dm.shape != (coords.n, coords.n):
        raise InputError(f"{coords.n} points do not match a {dm.shape} distance matrix")
    x = coords.points
    sq = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1)
    return float(np.max(np.abs(sq - dm))) if coords.n else 0.0


def verify_embedding(coords: EmbeddingCoords, d, tol: float = 1e-8) -> bool:
    return embedding_residual(coords, d) <= tol
