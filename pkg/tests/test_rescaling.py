import numpy as np
import pytest
from numpy.testing import assert_allclose

from formalism.rescaling import (DequantSpec, build_dequantisation, capacity, certify,
                                 dequant_coeffs, dequantise_matrix, dequantise_vector,
                                 overlap_bound, projector_scale_limit, require_S, require_T,
                                 rescale_factor, rescaling_from_rows, sample_dequantisation,
                                 sample_rescaling, sandwich_norm_ratio, scale_into_S, star_product)
from utils.errors import DimensionError, ValidationError
from utils.math_utils import dagger, fourier_matrix, random_complex_matrix, random_unitary


class TestCapacity:
    def test_identity_and_unitaries(self, rng):
        assert capacity(np.eye(3)) == 1.0
        assert_allclose(capacity(random_unitary(4, rng)), 1.0)

    def test_unitary_conjugation_changes_capacity(self):
        V = np.array([[1, 0], [1, 0]], dtype=np.complex128)
        U = fourier_matrix(2)
        assert_allclose(capacity(V), 1.0)
        assert_allclose(capacity(U @ V @ dagger(U)), np.sqrt(2))

    def test_normal_matrices_keep_capacity_under_dagger(self, random_normal):
        for d in (2, 3, 5):
            V = random_normal(d)
            assert_allclose(capacity(V), capacity(dagger(V)), rtol=1e-12)
        V = np.array([[1, 1], [0, 0]], dtype=np.complex128)
        assert_allclose(capacity(V), np.sqrt(2))
        assert_allclose(capacity(dagger(V)), 1.0)

    def test_projectors_are_rescalings(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 6))
            k = int(rng.integers(1, d + 1))
            Q, _ = np.linalg.qr(rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k)))
            assert certify(Q @ dagger(Q)).in_S

    def test_certificates(self):
        cert = certify(np.eye(2))
        assert cert.in_S and not cert.in_T and cert.proper
        assert cert.to_dict() == {"d": 2, "capacity": 1.0, "tol": 1e-9, "in_S": True, "in_T": False}
        A = build_dequantisation([1, -1j])
        cert = certify(A)
        assert cert.in_S and cert.in_T and not cert.proper

    def test_out_of_S(self):
        with pytest.raises(ValidationError, match="S_d"):
            require_S(2 * np.eye(2))
        with pytest.raises(ValidationError, match="T_d"):
            require_T(np.eye(2))

    def test_one_by_one_dequantisation(self):
        # en d = 1 toda matriz de S_1 tiene filas constantes
        assert certify([[0.5j]]).in_T


class TestStarProduct:
    def test_closure(self, rng):
        R, V = sample_rescaling(3, rng), sample_rescaling(3, rng)
        cert = star_product(R, V)
        assert cert.in_S
        assert_allclose(cert.matrix, R @ V / np.sqrt(3))

    def test_identity_is_not_a_unit(self):
        V = np.array([[1, 0], [0, 1]], dtype=np.complex128)
        assert not np.allclose(star_product(np.eye(2), V).matrix, V)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            star_product(np.eye(2), np.eye(3))


class TestScaling:
    def test_scale_into_S(self, rng):
        V = 3 * random_complex_matrix(3, rng)
        lam, cert = scale_into_S(V)
        assert_allclose(cert.capacity, 1.0)
        assert_allclose(lam, 1 / capacity(V))

    def test_scale_zero_matrix(self):
        lam, cert = scale_into_S(np.zeros((2, 2)))
        assert lam == float("inf") and cert.in_S

    def test_projector_scale_limit(self):
        P = np.full((4, 4), 0.25)
        lam0 = projector_scale_limit(P)
        assert_allclose(lam0, 2.0)
        assert_allclose(capacity(lam0 * P), 1.0)
        assert_allclose(projector_scale_limit(np.diag([1.0, 0.0])), 1.0)


class TestDequantisation:
    def test_coefficient_bound(self):
        with pytest.raises(ValidationError, match="> 1"):
            DequantSpec(np.array([1.5, 0]))

    def test_recover_coeffs(self):
        a = np.array([0.5, -1j, 0.3 + 0.4j])
        assert_allclose(dequant_coeffs(build_dequantisation(a)), a)

    def test_vector(self, rng):
        a = np.array([1, 0.5j, -0.25])
        f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        f /= np.linalg.norm(f)
        lam = dequantise_vector(build_dequantisation(a), f)
        assert_allclose(lam, np.sum(np.conj(a) * f))

    def test_vector_must_be_normalised(self):
        with pytest.raises(ValidationError, match="normalizado"):
            dequantise_vector(build_dequantisation([1, 1]), np.array([1.0, 1.0]))

    def test_matrix_reproduces_classical_sum(self, rng):
        theta = random_complex_matrix(3, rng)
        a = np.exp(2j * np.pi * rng.uniform(size=3))
        b = 0.5 * np.exp(2j * np.pi * rng.uniform(size=3))
        lam = dequantise_matrix(build_dequantisation(np.conj(a)), theta, build_dequantisation(b))
        assert_allclose(lam, a @ theta @ b)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_products_stay_dequantisations(self, rng, d):
        lam = 1 / np.sqrt(d)
        F = fourier_matrix(d)
        for _ in range(20):
            A, B = sample_dequantisation(d, rng), sample_dequantisation(d, rng)
            assert certify(lam * A @ B).in_T
            assert certify(lam * F @ A).in_T
        # a = b = 1 satura la cota: lambda = 1/sqrt(d) es el máximo
        J = build_dequantisation(np.ones(d))
        assert_allclose(capacity(lam * J @ J), 1.0)

    def test_sample_dequantisation(self, rng):
        for _ in range(20):
            assert certify(sample_dequantisation(4, rng)).in_T


class TestSampling:
    def test_rows_from_vectors(self):
        units = np.array([[1, 0], [1 / np.sqrt(2), 1j / np.sqrt(2)]])
        cert = rescaling_from_rows([0.5, 1.0], units)
        assert_allclose(cert.matrix, [[0.5, 0], [1 / np.sqrt(2), 1j / np.sqrt(2)]])

    def test_rows_from_vectors_validation(self):
        with pytest.raises(ValidationError, match="escalas"):
            rescaling_from_rows([1.5, 0.5], np.eye(2))
        with pytest.raises(ValidationError, match="normalizado"):
            rescaling_from_rows([1.0, 1.0], 2 * np.eye(2))

    @pytest.mark.parametrize("d", [1, 2, 5])
    def test_samples_in_S(self, rng, d):
        batch = sample_rescaling(d, rng, size=500)
        assert batch.shape == (500, d, d)
        assert np.max(np.linalg.norm(batch, axis=-1)) <= 1.0 + 1e-12

    def test_radius_distribution(self, rng):
        # radio u^{1/4} en d = 2: P(|row| <= r) = r^4
        rows = sample_rescaling(2, rng, size=20000)
        radii = np.linalg.norm(rows, axis=-1).ravel()
        assert_allclose(np.mean(radii <= 0.8), 0.8 ** 4, atol=0.01)


class TestBounds:
    def test_rescale_factor_range(self, rng):
        for _ in range(50):
            V = sample_rescaling(3, rng)
            f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            f /= np.linalg.norm(f)
            assert 0.0 <= rescale_factor(V, f) <= np.sqrt(3) + 1e-12

    def test_rescale_factor_contraction_and_dilation(self):
        f = np.array([1, 1]) / np.sqrt(2)
        assert_allclose(rescale_factor(0.5 * np.eye(2), f), 0.5)
        # A^† f = lambda|J> con lambda = sqrt(2)
        assert_allclose(rescale_factor(build_dequantisation([1, 1]), f), np.sqrt(2))

    def test_overlap_and_sandwich(self, rng):
        for _ in range(50):
            V, W = sample_rescaling(3, rng), sample_rescaling(3, rng)
            theta = random_complex_matrix(3, rng)
            assert overlap_bound(V, W) <= 1.0 + 1e-12
            assert sandwich_norm_ratio(theta, V, W) <= 1.0 + 1e-12
        assert sandwich_norm_ratio(np.zeros((2, 2)), np.eye(2), np.eye(2)) == 0.0
