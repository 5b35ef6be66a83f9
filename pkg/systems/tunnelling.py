# systems/tunnelling.py
# Barrera cuadrada V0 en 0 < x < a, unidades con hbar = 1

import logging
import math
from dataclasses import dataclass

import numpy as np

from config import DEGENERATE_DENOM, RESIDUAL_TOL, STRUCT_TOL
from formalism.rescaling import capacity
from utils.errors import NumericalError, ValidationError
from utils.math_utils import dagger, matrix_flags

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BarrierParams:
    m: float
    k: float
    V0: float
    a: float

    def __post_init__(self):
        for name in ("m", "k", "V0", "a"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{name} debe ser un real positivo: {value!r}")
        if self.E >= self.V0:
            raise ValidationError(f"E = k²/2m = {self.E:.12g} no está por debajo de V0 = {self.V0:.12g}")

    @property
    def E(self):
        return self.k ** 2 / (2 * self.m)

    @property
    def m_over_k(self):
        return self.m / self.k

    @classmethod
    def from_dict(cls, doc):
        try:
            return cls(m=doc["m"], k=doc["k"], V0=doc["V0"], a=doc["a"])
        except KeyError as exc:
            raise ValidationError(f"falta el parámetro {exc.args[0]!r}") from None

    def to_dict(self):
        return {"m": self.m, "k": self.k, "V0": self.V0, "a": self.a}


@dataclass(frozen=True)
class ScatterAmps:
    B: complex
    C: complex
    kappa: complex = 0j

    def __post_init__(self):
        if abs(self.flux - 1.0) > RESIDUAL_TOL:
            raise ValidationError(f"|B|² + |C|² = {self.flux:.15g} != 1")

    @property
    def flux(self):
        return abs(self.B) ** 2 + abs(self.C) ** 2

    def to_dict(self):
        return {
            "B": {"re": self.B.real, "im": self.B.imag, "abs": abs(self.B)},
            "C": {"re": self.C.real, "im": self.C.imag, "abs": abs(self.C)},
            "kappa": {"re": self.kappa.real, "im": self.kappa.imag},
            "flux": self.flux,
        }


# =====================================================
# Amplitudes de reflexión y transmisión
# =====================================================

def scattering_amplitudes(p):
    k, a = p.k, p.a
    lam = 1j * math.sqrt(2 * p.m * p.V0 - k ** 2)
    e2 = np.exp(2j * lam * a)
    denom = (k + lam) ** 2 - (k - lam) ** 2 * e2
    if abs(denom) < DEGENERATE_DENOM:
        raise NumericalError("denominador degenerado en las amplitudes",
                             diagnostics={"params": p.to_dict(), "denom": abs(denom)})
    B = complex((k ** 2 - lam ** 2) * (1 - e2) / denom)
    C = complex(4 * k * lam * np.exp(1j * (lam - k) * a) / denom)
    flux = abs(B) ** 2 + abs(C) ** 2
    if abs(flux - 1.0) > RESIDUAL_TOL:
        raise NumericalError("no se conserva el flujo", diagnostics={"params": p.to_dict(), "flux": flux})
    return ScatterAmps(B=B, C=C, kappa=complex(lam))


def flux_currents(p, amps=None):
    """Corrientes netas (k|A|²/m)(1 − |B|²) y (k|A|²/m)|C|² con A = sqrt(m/k)."""
    amps = amps or scattering_amplitudes(p)
    pref = p.k * p.m_over_k / p.m  # k|A|²/m = 1
    return pref * (1 - abs(amps.B) ** 2), pref * abs(amps.C) ** 2


# =====================================================
# Estados asintóticos y bloques 4×4
# =====================================================

@dataclass(frozen=True)
class TunnelStates:
    u_L: np.ndarray
    u_R: np.ndarray
    W: np.ndarray

    @property
    def norm_ratio(self):
        return float(np.linalg.norm(self.u_R) / np.linalg.norm(self.u_L))


def tunnel_states(p, amps=None):
    amps = amps or scattering_amplitudes(p)
    A = math.sqrt(p.m_over_k)
    u_L = A * np.array([1.0, amps.B], dtype=np.complex128)
    u_R = A * np.array([amps.C, 0.0], dtype=np.complex128)
    W = np.array([[amps.C, 0.0], [0.0, 0.0]], dtype=np.complex128)
    if np.linalg.norm(W @ u_L - u_R) > STRUCT_TOL * max(1.0, A):
        raise NumericalError("u_R != W u_L", diagnostics={"params": p.to_dict()})
    logger.debug(">> N(W) = |C| = %.12g", capacity(W))
    return TunnelStates(u_L=u_L, u_R=u_R, W=W)


@dataclass(frozen=True)
class TunnelBlocks:
    xi_L: float
    xi_R: float
    varpi_L: np.ndarray
    varpi_R: np.ndarray
    Pi_L: np.ndarray
    Pi_R: np.ndarray
    Wcal: np.ndarray
    orthogonality: float
    transfer_residual: float

    def to_dict(self):
        return {
            "xi_L": self.xi_L, "xi_R": self.xi_R, "xi_ratio": self.xi_R / self.xi_L,
            "orthogonality_residual": self.orthogonality,
            "transfer_residual": self.transfer_residual,
            "varpi_L_projector": matrix_flags(self.varpi_L, RESIDUAL_TOL).projector,
            "varpi_R_projector": matrix_flags(self.varpi_R, RESIDUAL_TOL).projector,
        }


def _block(top_left=None, bottom_left=None, bottom_right=None):
    out = np.zeros((4, 4), dtype=np.complex128)
    if top_left is not None:
        out[:2, :2] = top_left
    if bottom_left is not None:
        out[2:, :2] = bottom_left
    if bottom_right is not None:
        out[2:, 2:] = bottom_right
    return out


def tunnel_blocks(p, amps=None):
    """xi_L·varpi_L y xi_R·varpi_R en H_L(2) ⊕ H_R(2) con el acoplo 𝒲."""
    amps = amps or scattering_amplitudes(p)
    B, C = amps.B, amps.C
    nB = abs(B) ** 2
    xi_L = p.m_over_k * (1 + nB)
    xi_R = p.m_over_k * abs(C) ** 2
    varpi_L = np.array([[1.0, np.conj(B)], [B, nB]], dtype=np.complex128) / (1 + nB)
    varpi_R = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
    W = tunnel_states(p, amps).W

    Pi_L = _block(top_left=varpi_L)
    Pi_R = _block(bottom_right=varpi_R)
    Wcal = _block(bottom_left=W)

    for name, P in (("varpi_L", varpi_L), ("varpi_R", varpi_R)):
        if not matrix_flags(P, RESIDUAL_TOL).projector:
            raise NumericalError(f"{name} no es un proyector", diagnostics={"params": p.to_dict()})
    orth = float(np.linalg.norm(Pi_L @ Pi_R))
    transfer = float(np.linalg.norm(xi_L * Wcal @ Pi_L @ dagger(Wcal) - xi_R * Pi_R))
    if orth > STRUCT_TOL or transfer > RESIDUAL_TOL * max(1.0, xi_L):
        raise NumericalError("invariantes de los bloques de túnel rotos",
                             diagnostics={"orthogonality": orth, "transfer": transfer})
    return TunnelBlocks(xi_L=xi_L, xi_R=xi_R, varpi_L=varpi_L, varpi_R=varpi_R,
                        Pi_L=Pi_L, Pi_R=Pi_R, Wcal=Wcal,
                        orthogonality=orth, transfer_residual=transfer)
