import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import KG_UPPER
from formalism.forms import g_ascent, quantum_form
from systems.ultraquantum import (build_M, build_Pi, pi_table, range_basis, region_projectors,
                                  ultra_Q, ultra_window, verify_complementarity, z_from_phase)
from utils.errors import ValidationError
from utils.math_utils import dagger, matrix_flags


def random_unit(rng, n):
    return np.exp(2j * np.pi * rng.uniform(size=n))


class TestSemiUnitary:
    def test_rows_orthonormal(self, rng):
        for z in random_unit(rng, 50):
            M = build_M(z).M
            assert M.shape == (3, 6)
            assert np.linalg.norm(M @ dagger(M) - np.eye(3)) <= 1e-10

    def test_projector_spectrum(self, rng):
        for z in random_unit(rng, 50):
            P = build_Pi(z)
            assert matrix_flags(P).projector
            assert_allclose(np.linalg.eigvalsh(P), [0, 0, 0, 1, 1, 1], atol=1e-9)

    def test_explicit_table(self, generic_z):
        assert_allclose(build_M(generic_z).Pi, pi_table(generic_z), atol=1e-12)
        assert_allclose(np.diag(pi_table(generic_z)).real, np.full(6, 0.5))

    def test_non_unit_z(self):
        with pytest.raises(ValidationError, match=r"\|z\| debe ser 1"):
            build_M(1.1)


class TestComplementarity:
    def test_identities(self, rng):
        for z in random_unit(rng, 50):
            report = verify_complementarity(z, tol=1e-10)
            assert report.ok, report.residuals
            assert set(report.residuals) == {"sum_identity", "product_zero", "cross_zero", "left_right"}

    def test_report_dict(self, generic_z):
        doc = verify_complementarity(generic_z).to_dict()
        assert doc["ok"] is True
        assert_allclose(doc["z"]["re"], np.cos(np.pi / 7))

    def test_region_projectors(self, generic_z):
        theta_L, theta_R = region_projectors(generic_z, 0.17, 0.3)
        assert_allclose(theta_L @ theta_R, np.zeros((6, 6)), atol=1e-12)
        assert_allclose(theta_L / 0.17 + theta_R / 0.3, np.eye(6), atol=1e-12)

    def test_range_basis(self, generic_z):
        H3, H3_null = range_basis(generic_z)
        P = build_Pi(generic_z)
        assert_allclose(dagger(H3) @ H3, np.eye(3), atol=1e-12)
        assert_allclose(P @ H3, H3, atol=1e-10)
        assert_allclose(P @ H3_null, np.zeros((6, 3)), atol=1e-10)


class TestUltraQuantumValue:
    @pytest.mark.parametrize("xi", [0.05, 0.17, 0.2])
    def test_six_xi(self, generic_z, xi):
        P = build_Pi(generic_z)
        V = np.sqrt(2) * P
        assert_allclose(quantum_form(xi * P, V, V), 6 * xi, atol=1e-12)
        assert_allclose(ultra_Q(xi, generic_z), 6 * xi, atol=1e-12)

    def test_value_in_ultra_region(self, generic_z):
        q = ultra_Q(0.17, generic_z)
        assert_allclose(q, 1.02, atol=1e-12)
        assert 1.0 < q < KG_UPPER

    def test_invalid_xi(self, generic_z):
        with pytest.raises(ValidationError, match="xi_L"):
            ultra_Q(0.0, generic_z)

    def test_g_strictly_below_g_prime(self, generic_z):
        P = build_Pi(generic_z)
        first, _ = g_ascent(P, restarts=200, seed=42)
        second, _ = g_ascent(P, restarts=200, seed=7)
        assert 5.0 < first < 6.0 - 1e-3
        assert_allclose(first, second, atol=1e-6)


class TestWindow:
    def test_report(self, generic_z):
        report = ultra_window(generic_z, xi_L=0.17)
        assert report.xi_window[0] == pytest.approx(1 / 6)
        assert report.xi_window[0] < 0.17 <= report.xi_window[1]
        assert report.ultra
        doc = report.to_dict()
        assert doc["g_pi_is_lower_bound"] is True
        assert doc["optimizer"]["restarts"] == 200
        assert_allclose(doc["Q_range"]["hi"], 6 / report.g_pi_est)

    def test_window_stable_across_seeds(self, generic_z):
        first = ultra_window(generic_z, seed=42)
        second = ultra_window(generic_z, seed=7)
        assert_allclose(first.g_pi_est, second.g_pi_est, atol=1e-6)
        assert ultra_window(generic_z, seed=42).to_dict() == first.to_dict()

    def test_phase_helper(self):
        assert_allclose(z_from_phase(np.pi / 7), np.exp(1j * np.pi / 7))
