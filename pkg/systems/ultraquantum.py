# systems/ultraquantum.py
# Matriz semi-unitaria M(z) de 3×6, proyector Pi(z) = M(z)^† M(z) y Q(xi_L Pi(z)) = 6 xi_L

import cmath
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from config import DEFAULT_MAX_ITERS, DEFAULT_SEED, DEFAULT_TOL, RESIDUAL_TOL, STRUCT_TOL, ULTRA_RESTARTS
from formalism.forms import g_ascent_with_info, quantum_form
from utils.errors import NumericalError, ValidationError
from utils.math_utils import dagger

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)


def _unit(z):
    z = complex(z)
    if not cmath.isfinite(z) or abs(abs(z) - 1.0) > STRUCT_TOL:
        raise ValidationError(f"|z| debe ser 1: |z| = {abs(z)!r}")
    return z


def z_from_phase(phi):
    return cmath.exp(1j * float(phi))


# =====================================================
# M(z) y Pi(z)
# =====================================================

@dataclass(frozen=True)
class SemiUnitary:
    z: complex
    M: np.ndarray

    @property
    def Pi(self):
        return dagger(self.M) @ self.M


def _raw_M(z):
    return 0.5 * np.array([
        [1, z, 0, 1, -z, 0],
        [z, 0, 1, -z, 0, 1],
        [0, 1, z, 0, 1, -z],
    ], dtype=np.complex128)


def build_M(z):
    z = _unit(z)
    M = _raw_M(z)
    left = np.linalg.norm(M @ dagger(M) - np.eye(3))
    if left > STRUCT_TOL:
        raise NumericalError("M M^† != 1_3", diagnostics={"z": str(z), "residual": float(left)})
    P = dagger(M) @ M
    ev = np.linalg.eigvalsh(P)
    if np.max(np.abs(ev - np.array([0, 0, 0, 1, 1, 1]))) > RESIDUAL_TOL:
        raise NumericalError("M^† M no tiene espectro {0,0,0,1,1,1}",
                             diagnostics={"z": str(z), "eigenvalues": ev.tolist()})
    return SemiUnitary(z=z, M=M)


def pi_table(z):
    """Pi(z) escrito entrada a entrada (factor 1/4)."""
    z = _unit(z)
    c = z.conjugate()
    return 0.25 * np.array([
        [2, z, c, 0, -z, c],
        [c, 2, z, c, 0, -z],
        [z, c, 2, -z, c, 0],
        [0, z, -c, 2, -z, -c],
        [-c, 0, z, -c, 2, -z],
        [z, -c, 0, -z, -c, 2],
    ], dtype=np.complex128)


def build_Pi(z):
    P = build_M(z).Pi
    residual = np.max(np.abs(P - pi_table(z)))
    if residual > STRUCT_TOL:
        raise NumericalError("Pi(z) no coincide con la tabla explícita",
                             diagnostics={"z": str(z), "residual": float(residual)})
    return P


def range_basis(z):
    """Bases ortonormales de H(3) (autovalor 1) y H(3)_null (autovalor 0)."""
    ev, vecs = sla.eigh(build_Pi(z))
    return vecs[:, 3:], vecs[:, :3]


# =====================================================
# Complementariedad Pi(z) / Pi(-z)
# =====================================================

@dataclass(frozen=True)
class ComplementarityReport:
    z: complex
    tol: float
    residuals: dict

    @property
    def ok(self):
        return all(r <= self.tol for r in self.residuals.values())

    def to_dict(self):
        return {"z": {"re": self.z.real, "im": self.z.imag}, "tol": self.tol,
                "residuals": dict(self.residuals), "ok": self.ok}


def verify_complementarity(z, tol=STRUCT_TOL):
    z = _unit(z)
    M_p, M_m = build_M(z).M, build_M(-z).M
    P_p, P_m = dagger(M_p) @ M_p, dagger(M_m) @ M_m
    W = dagger(M_m) @ M_p
    residuals = {
        "sum_identity": float(np.linalg.norm(P_p + P_m - np.eye(6))),
        "product_zero": float(np.linalg.norm(P_m @ P_p)),
        "cross_zero": float(np.linalg.norm(M_m @ dagger(M_p))),
        "left_right": float(np.linalg.norm(P_p - dagger(W) @ P_m @ W)),
    }
    report = ComplementarityReport(z=z, tol=tol, residuals=residuals)
    if not report.ok:
        logger.warning(">> complementariedad fallida para z=%s: %s", z, residuals)
    return report


def region_projectors(z, xi_L, xi_R):
    """theta_L = xi_L Pi(z) a la izquierda de la barrera, theta_R = xi_R (1 − Pi(z)) = xi_R Pi(−z) a la derecha."""
    P = build_Pi(z)
    theta_L = xi_L * P
    theta_R = xi_R * (np.eye(6) - P)
    if np.linalg.norm(theta_R - xi_R * build_Pi(-_unit(z))) > RESIDUAL_TOL * max(1.0, xi_R) \
            or np.linalg.norm(theta_L @ theta_R) > RESIDUAL_TOL * max(1.0, xi_L * xi_R):
        raise NumericalError("proyectores de región inconsistentes", diagnostics={"z": str(z)})
    return theta_L, theta_R


# =====================================================
# Valor ultra-cuántico y ventana de xi_L
# =====================================================

def ultra_Q(xi_L, z):
    """|Tr(xi_L Pi(z) (sqrt2 Pi(z)) (sqrt2 Pi(z))^†)| = 6 xi_L."""
    if not xi_L > 0:
        raise ValidationError(f"xi_L debe ser positivo: {xi_L!r}")
    P = build_Pi(z)
    V = SQRT2 * P
    q = quantum_form(xi_L * P, V, V, tol=DEFAULT_TOL)
    if abs(q - 6 * xi_L) > STRUCT_TOL * max(1.0, 6 * xi_L):
        raise NumericalError("Q(theta_L) != 6 xi_L", diagnostics={"Q": q, "xi_L": xi_L})
    return q


@dataclass(frozen=True)
class UltraReport:
    z: complex
    g_pi_est: float
    xi_window: tuple
    q_range: tuple
    optimizer: dict
    xi_L: Optional[float] = None
    Q_value: Optional[float] = None

    @property
    def ultra(self):
        return self.Q_value is not None and self.Q_value > 1.0

    def to_dict(self):
        out = {
            "z": {"re": self.z.real, "im": self.z.imag, "phase": cmath.phase(self.z)},
            "g_pi_est": self.g_pi_est,
            "g_pi_is_lower_bound": True,
            "xi_window": {"lo": self.xi_window[0], "hi": self.xi_window[1],
                          "lo_open": True, "hi_closed": True, "outer_estimate": True},
            "Q_range": {"lo": self.q_range[0], "hi": self.q_range[1]},
            "optimizer": dict(self.optimizer),
        }
        if self.xi_L is not None:
            out["xi_L"] = self.xi_L
            out["Q_value"] = self.Q_value
            out["ultra_quantum"] = self.ultra
        return out


def ultra_window(z, xi_L=None, restarts=ULTRA_RESTARTS, max_iters=DEFAULT_MAX_ITERS, seed=DEFAULT_SEED):
    """Ventana (1/6, 1/g_pi_est] para xi_L; con g_pi_est cota inferior la ventana es una estimación exterior."""
    z = _unit(z)
    g_pi, _, info = g_ascent_with_info(build_Pi(z), restarts, max_iters, seed)
    if g_pi > 6 + DEFAULT_TOL:
        raise NumericalError("g[Pi(z)] supera g' = 6", diagnostics={"g_pi_est": g_pi})
    q_value = None
    if xi_L is not None:
        q_value = ultra_Q(xi_L, z)
    logger.info(">> z=%s g_pi_est=%.12g", z, g_pi)
    return UltraReport(z=z, g_pi_est=g_pi, xi_window=(1.0 / 6.0, 1.0 / g_pi), q_range=(1.0, 6.0 / g_pi),
                       optimizer=info.to_dict(), xi_L=xi_L, Q_value=q_value)
