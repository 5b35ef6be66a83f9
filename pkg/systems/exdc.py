# systems/exdc.py
# theta = (m/k)·[[1, B], [B, B²]] con B real en (0, 1]

import logging
import math
from dataclasses import dataclass

import numpy as np

from config import DEFAULT_TOL, SAMPLE_SHARD
from formalism.forms import g_grid, g_prime
from formalism.rescaling import sample_rescaling
from utils.errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)


def _check(B_real, m_over_k):
    if not (isinstance(B_real, (int, float)) and math.isfinite(B_real) and 0 < B_real <= 1):
        raise ValidationError(f"B debe estar en (0, 1]: {B_real!r}")
    if not (isinstance(m_over_k, (int, float)) and math.isfinite(m_over_k) and m_over_k > 0):
        raise ValidationError(f"m/k debe ser positivo: {m_over_k!r}")


def exdc_theta(B_real, m_over_k=1.0):
    _check(B_real, m_over_k)
    B = float(B_real)
    return m_over_k * np.array([[1.0, B], [B, B * B]], dtype=np.complex128)


def exdc_window(B_real, m_over_k=1.0):
    """(k/(2m(1+B²)), k/(m(1+B)²)]; vacía si B = 1."""
    _check(B_real, m_over_k)
    lo = 1.0 / (2 * m_over_k * (1 + B_real ** 2))
    hi = 1.0 / (m_over_k * (1 + B_real) ** 2)
    return lo, hi


@dataclass(frozen=True)
class ExdcReport:
    B: float
    m_over_k: float
    theta: np.ndarray
    g: float
    g_prime: float
    g_grid: float
    window_lo: float
    window_hi: float

    @property
    def window_empty(self):
        return not self.window_lo < self.window_hi

    @property
    def window_length(self):
        return max(0.0, self.window_hi - self.window_lo)

    def to_dict(self):
        return {
            "B": self.B, "m_over_k": self.m_over_k,
            "g": self.g, "g_prime": self.g_prime, "g_grid": self.g_grid,
            "window": {"lo": self.window_lo, "hi": self.window_hi,
                       "lo_open": True, "hi_closed": True, "empty": self.window_empty},
        }


def exdc_report(B_real, m_over_k=1.0, cross_check=True):
    theta = exdc_theta(B_real, m_over_k)
    g = m_over_k * (1 + B_real) ** 2
    gp = 2 * m_over_k * (1 + B_real ** 2)
    lo, hi = exdc_window(B_real, m_over_k)
    if B_real == 1:
        hi = lo

    gp_num = g_prime(theta)
    if abs(gp_num - gp) > DEFAULT_TOL * max(1.0, gp):
        raise NumericalError("g' numérico no coincide con la forma cerrada",
                             diagnostics={"closed": gp, "numeric": gp_num})
    g_num = g
    if cross_check:
        g_num = g_grid(theta)
        if abs(g_num - g) > 1e-6 * max(1.0, g):
            raise NumericalError("g de malla no coincide con la forma cerrada",
                                 diagnostics={"closed": g, "grid": g_num})
    return ExdcReport(B=float(B_real), m_over_k=float(m_over_k), theta=theta, g=g,
                      g_prime=gp, g_grid=float(g_num), window_lo=lo, window_hi=hi)


# =====================================================
# Muestreo de Q(lambda·theta) sobre S_2 × S_2
# =====================================================

def _shard_max(lam_theta, n, seed_seq):
    rng = np.random.default_rng(seed_seq)
    V = sample_rescaling(2, rng, size=n)
    W = sample_rescaling(2, rng, size=n)
    VW = V @ np.conj(np.swapaxes(W, -1, -2))
    # Tr(lam_theta VW^†) = sum_ij (lam_theta)_ij (VW^†)_ji
    q = np.abs(np.einsum("ij,nji->n", lam_theta, VW))
    return float(np.max(q))


def exdc_Q_bound_sample(B_real, lam, n, seed, m_over_k=1.0):
    """Máximo de |Tr(lambda·theta V W^†)| sobre n pares (V, W) uniformes en S_2."""
    lo, hi = exdc_window(B_real, m_over_k)
    if not (lo < lam <= hi * (1 + 1e-12)):
        raise ValidationError(f"lambda = {lam!r} fuera de la ventana ({lo:.12g}, {hi:.12g}]")
    if n < 1:
        raise ValidationError(f"n debe ser >= 1: {n!r}")
    lam_theta = lam * exdc_theta(B_real, m_over_k)

    # Un SeedSequence hijo por fragmento: el máximo depende solo de seed, n y SAMPLE_SHARD
    shards = [min(SAMPLE_SHARD, n - start) for start in range(0, n, SAMPLE_SHARD)]
    children = np.random.SeedSequence(seed).spawn(len(shards))
    best = max(_shard_max(lam_theta, size, child) for size, child in zip(shards, children))
    logger.info(">> exDC B=%.6g lambda=%.6g n=%d: max Q = %.12g", B_real, lam, n, best)
    return best
