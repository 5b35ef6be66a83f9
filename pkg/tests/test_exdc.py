import numpy as np
import pytest
from numpy.testing import assert_allclose

from formalism.forms import quantum_form
from formalism.rescaling import sample_rescaling
from systems.exdc import exdc_Q_bound_sample, exdc_report, exdc_theta, exdc_window
from utils.errors import ValidationError


@pytest.mark.parametrize("B", [0.25, 0.5, 0.75, 1.0])
def test_closed_forms_match_numerics(B):
    report = exdc_report(B)
    assert_allclose(report.g_grid, (1 + B) ** 2, atol=1e-6)
    assert_allclose(report.g_prime, 2 * (1 + B ** 2), atol=1e-9)
    assert report.window_empty == (B == 1.0)


def test_window_values():
    lo, hi = exdc_window(0.5)
    assert_allclose((lo, hi), (0.4, 1 / 2.25))
    doc = exdc_report(0.5).to_dict()
    assert doc["window"] == {"lo": lo, "hi": hi, "lo_open": True, "hi_closed": True, "empty": False}


def test_mass_ratio_scales_theta():
    assert_allclose(exdc_theta(0.5, m_over_k=2.0), 2.0 * np.array([[1, 0.5], [0.5, 0.25]]))
    lo, hi = exdc_window(0.5, m_over_k=2.0)
    assert_allclose((lo, hi), (0.2, 1 / 4.5))


@pytest.mark.parametrize("B", [0.0, -0.2, 1.5, float("nan")])
def test_invalid_B(B):
    with pytest.raises(ValidationError, match="B debe"):
        exdc_theta(B)


def test_sampled_bound_at_window_edge():
    best = exdc_Q_bound_sample(0.5, 1 / 2.25, 10 ** 5, seed=42)
    assert 0.0 < best <= 1.0 + 1e-9


def test_sampler_is_deterministic():
    assert exdc_Q_bound_sample(0.5, 0.42, 25_000, seed=7) == exdc_Q_bound_sample(0.5, 0.42, 25_000, seed=7)


def test_sampler_agrees_with_quantum_form():
    lam = 0.42
    rng = np.random.default_rng(np.random.SeedSequence(3).spawn(1)[0])
    V = sample_rescaling(2, rng, size=50)
    W = sample_rescaling(2, rng, size=50)
    expected = max(quantum_form(lam * exdc_theta(0.5), V[k], W[k]) for k in range(50))
    assert_allclose(exdc_Q_bound_sample(0.5, lam, 50, seed=3), expected, rtol=1e-12)


def test_sampler_rejects_lambda_outside_window():
    with pytest.raises(ValidationError, match="fuera de la ventana"):
        exdc_Q_bound_sample(0.5, 0.3, 100, seed=1)
    with pytest.raises(ValidationError, match="fuera de la ventana"):
        exdc_Q_bound_sample(1.0, 0.25, 100, seed=1)
    with pytest.raises(ValidationError, match="n debe"):
        exdc_Q_bound_sample(0.5, 0.42, 0, seed=1)
