import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qembed.errors import ConvergenceError, DiameterOutOfRange, InputError, NotEmbeddable
from qembed.graph import (
    bfs_distances,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    path_graph,
)
from qembed.spectral import (
    EmbeddingCoords,
    alpha_min_numeric,
    distance_spectrum,
    embedding_residual,
    gram_matrix,
    ones_complement_basis,
    qec_numeric,
    quadratic_embedding,
    restrict_to_ones_complement,
    sym_eigen,
    verify_embedding,
)

C4 = bfs_distances(cycle_graph(4))


def lapack_qec(d):
    """Independent route: QR-completed basis of the ones complement plus LAPACK eigh."""
    n = len(d)
    q, _ = np.linalg.qr(np.column_stack([np.ones(n), np.eye(n)[:, : n - 1]]))
    b = q[:, 1:]
    return np.linalg.eigvalsh(b.T @ np.asarray(d, float) @ b)[-1]


class TestSymEigen:
    def test_diagonal(self):
        s = sym_eigen(np.diag([3.0, 1.0, 2.0]))
        assert s.eigenvalues.tolist() == [3.0, 2.0, 1.0]

    def test_all_ones(self):
        assert np.allclose(sym_eigen(np.ones((3, 3))).eigenvalues, [3, 0, 0], atol=1e-12)

    def test_c4_top(self):
        assert sym_eigen(C4).eigenvalues[0] == pytest.approx(4, abs=1e-12)

    def test_rejects_asymmetric(self):
        with pytest.raises(InputError):
            sym_eigen([[0, 1], [2, 0]])

    def test_one_by_one_and_zero(self):
        assert sym_eigen([[5.0]]).eigenvalues.tolist() == [5.0]
        assert sym_eigen(np.zeros((3, 3))).eigenvalues.tolist() == [0, 0, 0]

    def test_iteration_cap(self):
        m = np.array([[1.0, 2.0, 3.0], [2.0, 0.0, 1.0], [3.0, 1.0, 5.0]])
        with pytest.raises(ConvergenceError):
            sym_eigen(m, max_sweeps=1)

    def test_deterministic(self):
        m = np.random.default_rng(0).normal(size=(7, 7))
        m = m + m.T
        a, b = sym_eigen(m), sym_eigen(m)
        assert np.array_equal(a.eigenvalues, b.eigenvalues) and np.array_equal(a.eigenvectors, b.eigenvectors)

    @settings(max_examples=80, deadline=None)
    @given(arrays(np.float64, (6, 6), elements=st.floats(-50, 50, allow_nan=False)))
    def test_spectrum_invariants(self, x):
        m = (x + x.T) / 2
        s = sym_eigen(m)
        norm = np.linalg.norm(m, 2)
        assert np.all(np.diff(s.eigenvalues) <= 0)
        assert np.allclose(s.eigenvectors.T @ s.eigenvectors, np.eye(6), atol=1e-9)
        for lam, v in zip(s.eigenvalues, s.eigenvectors.T):
            assert np.linalg.norm(m @ v - lam * v) <= 1e-9 * (1 + abs(lam)) * max(norm, 1e-300) + 1e-300
        assert np.allclose(s.eigenvalues, np.linalg.eigvalsh(m)[::-1], atol=1e-9 * (1 + norm))


class TestRestriction:
    def test_basis_orthonormal_and_orthogonal_to_ones(self):
        for n in range(2, 12):
            b = ones_complement_basis(n)
            assert np.allclose(b.T @ b, np.eye(n - 1), atol=1e-14)
            assert np.allclose(np.ones(n) @ b, 0, atol=1e-14)

    def test_identity(self):
        assert np.allclose(restrict_to_ones_complement(np.eye(3)), np.eye(2), atol=1e-15)

    def test_all_ones_vanishes(self):
        assert np.allclose(restrict_to_ones_complement(np.ones((4, 4))), 0, atol=1e-14)

    def test_k2(self):
        assert np.allclose(restrict_to_ones_complement(bfs_distances(complete_graph(2))), [[-1.0]], atol=1e-15)

    def test_needs_two(self):
        with pytest.raises(InputError):
            restrict_to_ones_complement([[0.0]])


class TestQecNumeric:
    @pytest.mark.parametrize("n", range(2, 7))
    def test_complete(self, n):
        assert qec_numeric(bfs_distances(complete_graph(n))).value == pytest.approx(-1, abs=1e-12)

    def test_p3(self):
        assert qec_numeric(bfs_distances(path_graph(3))).value == pytest.approx(-2 / 3, abs=1e-12)

    def test_c4(self):
        assert abs(qec_numeric(C4).value) <= 1e-12

    def test_five_vertex_non_qe(self):
        from qembed.graph6 import parse_graph6

        q = qec_numeric(bfs_distances(parse_graph6("DNw"))).value
        assert q == pytest.approx(4 / (11 + math.sqrt(161)), abs=1e-12)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_paths(self, n):
        q = qec_numeric(bfs_distances(path_graph(n))).value
        assert q == pytest.approx(-1 / (1 + math.cos(math.pi / n)), abs=1e-9)

    @pytest.mark.parametrize("n", range(3, 16))
    def test_cycles(self, n):
        q = qec_numeric(bfs_distances(cycle_graph(n))).value
        expected = 0.0 if n % 2 == 0 else -1 / (4 * math.cos(math.pi / n) ** 2)
        assert q == pytest.approx(expected, abs=1e-9)

    def test_certificate(self, connected_with_distances):
        for g, d in connected_with_distances:
            r = qec_numeric(d)
            f = r.certificate
            assert abs(f @ f - 1) <= 1e-9
            assert abs(f.sum()) <= 1e-9
            assert abs(f @ d @ f - r.value) <= 1e-8
            assert r.residual <= 1e-9
            assert f[np.flatnonzero(np.abs(f) > 1e-12)[0]] > 0

    def test_matches_lapack(self, connected_with_distances):
        for _, d in connected_with_distances:
            assert qec_numeric(d).value == pytest.approx(lapack_qec(d), abs=1e-10)


class TestAlphaMin:
    def test_k3(self):
        assert alpha_min_numeric(complete_graph(3)) == pytest.approx(-1, abs=1e-12)

    def test_k32(self):
        assert alpha_min_numeric(complete_multipartite([3, 2])) == pytest.approx(-12 / 5, abs=1e-12)

    def test_c4(self):
        assert alpha_min_numeric(cycle_graph(4)) == pytest.approx(-2, abs=1e-12)

    def test_diameter_out_of_range(self):
        with pytest.raises(DiameterOutOfRange):
            alpha_min_numeric(path_graph(4))

    def test_reduction_identity(self, connected_with_distances):
        checked = 0
        for g, d in connected_with_distances:
            if d.max() <= 2:
                assert abs(qec_numeric(d).value - (-2 - alpha_min_numeric(g))) <= 1e-8
                checked += 1
        assert checked > 50


class TestDistanceSpectrum:
    def test_k2(self):
        assert np.allclose(distance_spectrum(bfs_distances(complete_graph(2))).eigenvalues, [1, -1])

    def test_k3(self):
        assert np.allclose(distance_spectrum(bfs_distances(complete_graph(3))).eigenvalues, [2, -1, -1])

    def test_c4(self):
        assert distance_spectrum(C4).eigenvalues[0] == pytest.approx(4)

    def test_sandwich(self, connected_with_distances):
        for _, d in connected_with_distances:
            lam = distance_spectrum(d).eigenvalues
            q = qec_numeric(d).value
            assert lam[1] - 1e-8 <= q < lam[0]


class TestEmbedding:
    def test_k2(self):
        e = quadratic_embedding(bfs_distances(complete_graph(2)))
        assert e.dim == 1 and verify_embedding(e, [[0, 1], [1, 0]])

    def test_c4(self):
        e = quadratic_embedding(C4)
        assert e.n == 4 and e.dim <= 3 and verify_embedding(e, C4, 1e-8)

    def test_unit_square(self):
        square = EmbeddingCoords(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
        assert verify_embedding(square, C4)
        bumped = square.points.copy()
        bumped[0, 0] += 0.1
        assert not verify_embedding(EmbeddingCoords(bumped), C4)

    def test_k32_not_embeddable(self):
        with pytest.raises(NotEmbeddable) as exc:
            quadratic_embedding(bfs_distances(complete_multipartite([3, 2])))
        assert exc.value.qec == pytest.approx(0.4)
        assert "0.4" in str(exc.value)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            verify_embedding(EmbeddingCoords(np.zeros((3, 1))), C4)

    def test_gram_is_centered(self):
        g = gram_matrix(C4)
        assert np.allclose(g.sum(axis=0), 0)

    def test_schoenberg_consistency(self, connected_with_distances):
        for _, d in connected_with_distances:
            q = qec_numeric(d).value
            try:
                e = quadratic_embedding(d, 1e-9)
            except NotEmbeddable:
                assert q > 0
            else:
                assert q <= 1e-9
                assert embedding_residual(e, d) <= 1e-8
