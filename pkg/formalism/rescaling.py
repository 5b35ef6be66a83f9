# formalism/rescaling.py

import logging
from dataclasses import dataclass

import numpy as np

from config import DEFAULT_TOL, RESIDUAL_TOL, STRUCT_TOL
from utils.errors import DimensionError, ValidationError
from utils.math_utils import as_cmat, as_cvec, dagger, frobenius_norm, ones_objects, same_square

logger = logging.getLogger(__name__)


# =====================================================
# Capacidad N(V) y certificados S_d / T_d
# =====================================================

@dataclass(frozen=True)
class RescalingCert:
    matrix: np.ndarray
    capacity: float
    tol: float
    in_S: bool
    in_T: bool

    @property
    def d(self):
        return self.matrix.shape[0]

    @property
    def proper(self):
        """Pertenece a S_d \\ T_d."""
        return self.in_S and not self.in_T

    def to_dict(self):
        return {"d": int(self.d), "capacity": self.capacity, "tol": self.tol,
                "in_S": self.in_S, "in_T": self.in_T}


def capacity(V):
    """N(V) = max_i sqrt((VV^†)_ii), la mayor norma de fila."""
    V = as_cmat(V, "V", square=True)
    return float(np.sqrt(np.max(np.sum(np.abs(V) ** 2, axis=1))))


def _row_constant(V, tol):
    """Filas constantes A_rs = a_r/sqrt(d) con |a_r| <= 1 + tol."""
    d = V.shape[0]
    deviation = np.max(np.abs(V - V[:, :1]))
    if deviation > tol:
        return False
    return bool(np.all(np.abs(V[:, 0]) * np.sqrt(d) <= 1.0 + tol))


def certify(V, tol=DEFAULT_TOL):
    V = as_cmat(V, "V", square=True)
    cap = capacity(V)
    in_S = cap <= 1.0 + tol
    in_T = in_S and _row_constant(V, tol)
    return RescalingCert(matrix=V, capacity=cap, tol=tol, in_S=bool(in_S), in_T=bool(in_T))


def require_S(V, name="V", tol=DEFAULT_TOL):
    cert = certify(V, tol)
    if not cert.in_S:
        raise ValidationError(f"{name} no pertenece a S_d: N({name}) = {cert.capacity:.12g}")
    return cert


def require_T(A, name="A", tol=DEFAULT_TOL):
    cert = certify(A, tol)
    if not cert.in_T:
        raise ValidationError(f"{name} no es una matriz de decuantización (T_d)")
    return cert


def star_product(R, V, tol=DEFAULT_TOL):
    """R ⋆ V = RV/sqrt(d); semigrupo sin unidad sobre S_d."""
    R = require_S(R, "R", tol).matrix
    V = require_S(V, "V", tol).matrix
    d = same_square(R, V, names=["R", "V"])
    return certify(R @ V / np.sqrt(d), tol)


def scale_into_S(V, tol=DEFAULT_TOL):
    """lambda_max = 1/N(V) y el certificado de lambda_max·V.

    La matriz nula devuelve lambda_max = inf (cualquier lambda sirve).
    """
    V = as_cmat(V, "V", square=True)
    cap = capacity(V)
    if cap == 0.0:
        logger.debug(">> matriz nula en scale_into_S: lambda_max = inf")
        return float("inf"), certify(V, tol)
    lam = 1.0 / cap
    return lam, certify(lam * V, tol)


def projector_scale_limit(P, tol=DEFAULT_TOL):
    """lambda_0 = 1/sqrt(max_r P_rr); la fila r de un proyector tiene norma sqrt(P_rr)."""
    P = as_cmat(P, "P", square=True)
    diag = np.real(np.diag(P))
    top = float(np.max(diag))
    if top <= tol:
        return float("inf")
    return 1.0 / float(np.sqrt(top))


# =====================================================
# Matrices de decuantización
# =====================================================

@dataclass(frozen=True)
class DequantSpec:
    coeffs: np.ndarray

    def __post_init__(self):
        a = as_cvec(self.coeffs, "coeffs")
        bad = np.flatnonzero(np.abs(a) > 1.0 + STRUCT_TOL)
        if bad.size:
            raise ValidationError(f"|a_{bad[0]}| = {abs(a[bad[0]]):.12g} > 1")
        object.__setattr__(self, "coeffs", a)

    @property
    def d(self):
        return self.coeffs.shape[0]


def build_dequantisation(spec):
    """A_rs = a_r/sqrt(d) para todo s."""
    if not isinstance(spec, DequantSpec):
        spec = DequantSpec(spec)
    d = spec.d
    return np.repeat(spec.coeffs[:, None], d, axis=1) / np.sqrt(d)


def dequant_coeffs(A, tol=DEFAULT_TOL):
    """Recupera a_r = sqrt(d)·A_r0 de una matriz de T_d."""
    A = require_T(A, "A", tol).matrix
    return A[:, 0] * np.sqrt(A.shape[0])


def dequantise_vector(A, f, tol=DEFAULT_TOL):
    """A^† f = lambda |J>, con lambda = sum a_r^* f_r."""
    a = dequant_coeffs(A, tol)
    f = as_cvec(f, "f")
    d = a.shape[0]
    if f.shape[0] != d:
        raise DimensionError(f"f tiene dimensión {f.shape[0]}, A es {d}×{d}")
    if abs(np.linalg.norm(f) - 1.0) > RESIDUAL_TOL:
        raise ValidationError(f"f no está normalizado: ||f|| = {np.linalg.norm(f):.12g}")
    lam = complex(np.sum(np.conj(a) * f))
    J_vec, _ = ones_objects(d)
    residual = np.linalg.norm(dagger(as_cmat(A)) @ f - lam * J_vec)
    if residual > RESIDUAL_TOL:
        logger.warning(">> residuo de decuantización de vector %.3g", residual)
    return lam


def dequantise_matrix(A1, theta, A2, tol=DEFAULT_TOL):
    """A1^† theta A2 = (lambda/d) J_d con A1 = A(a^*), A2 = A(b); devuelve lambda = sum a_r theta_rs b_s."""
    require_T(A1, "A1", tol)
    require_T(A2, "A2", tol)
    A1 = as_cmat(A1)
    A2 = as_cmat(A2)
    theta = as_cmat(theta, "theta")
    d = same_square(A1, theta, A2, names=["A1", "theta", "A2"])
    product = dagger(A1) @ theta @ A2
    lam = complex(np.trace(product))
    _, J = ones_objects(d)
    residual = np.linalg.norm(product - lam / d * J)
    if residual > RESIDUAL_TOL * max(1.0, frobenius_norm(theta)):
        logger.warning(">> residuo de decuantización de matriz %.3g", residual)
    return lam


def sample_dequantisation(d, rng):
    radius = np.sqrt(rng.uniform(0.0, 1.0, d))
    a = radius * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, d))
    return build_dequantisation(DequantSpec(a))


# =====================================================
# Construcción por filas y muestreo de S_d
# =====================================================

def rescaling_from_rows(scales, units, tol=DEFAULT_TOL):
    """Fila r = scales[r]·units[r]."""
    scales = np.asarray(scales, dtype=float)
    units = as_cmat(units, "units")
    if units.shape[0] != scales.shape[0] or units.shape[0] != units.shape[1]:
        raise DimensionError(f"{scales.shape[0]} escalas para vectores de forma {units.shape}")
    if np.any(scales < 0.0) or np.any(scales > 1.0):
        raise ValidationError(f"escalas fuera de [0, 1]: {scales.tolist()}")
    norms = np.linalg.norm(units, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > RESIDUAL_TOL)
    if bad.size:
        raise ValidationError(f"el vector de la fila {bad[0]} no está normalizado: {norms[bad[0]]:.12g}")
    return certify(scales[:, None] * units, tol)


def sample_rescaling(d, rng, size=None):
    """Matrices de S_d con filas uniformes en la bola unidad de C^d.

    Dirección gaussiana y radio u^{1/(2d)} (volumen real de dimensión 2d).
    """
    shape = (d, d) if size is None else (size, d, d)
    Z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    norms = np.linalg.norm(Z, axis=-1, keepdims=True)
    u = 1.0 - rng.uniform(0.0, 1.0, shape[:-1] + (1,))  # u en (0, 1]
    return Z / norms * u ** (1.0 / (2 * d))


# =====================================================
# Cotas de reescalado
# =====================================================

def rescale_factor(V, f):
    """||V^† f|| para f normalizado; <= 1 contrae f, > 1 lo dilata."""
    V = as_cmat(V, "V", square=True)
    f = as_cvec(f, "f")
    if f.shape[0] != V.shape[0]:
        raise DimensionError(f"f tiene dimensión {f.shape[0]}, V es {V.shape[0]}×{V.shape[0]}")
    if abs(np.linalg.norm(f) - 1.0) > RESIDUAL_TOL:
        raise ValidationError(f"f no está normalizado: ||f|| = {np.linalg.norm(f):.12g}")
    return float(np.linalg.norm(dagger(V) @ f))


def overlap_bound(V, W):
    """max_ik |(VW^†)_ik|."""
    V = as_cmat(V, "V")
    W = as_cmat(W, "W")
    same_square(V, W, names=["V", "W"])
    return float(np.max(np.abs(V @ dagger(W))))


def sandwich_norm_ratio(theta, V, W):
    """||W^† theta V||_F / (d ||theta||_F)."""
    theta = as_cmat(theta, "theta")
    V = as_cmat(V, "V")
    W = as_cmat(W, "W")
    d = same_square(theta, V, W, names=["theta", "V", "W"])
    denom = d * frobenius_norm(theta)
    if denom == 0.0:
        return 0.0
    return frobenius_norm(dagger(W) @ theta @ V) / denom
