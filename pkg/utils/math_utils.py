# utils/math_utils.py

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from numba import njit

from config import DEFAULT_TOL
from utils.errors import DimensionError, NumericalError, ValidationError

logger = logging.getLogger(__name__)


# =====================================================
# Validación de matrices y vectores complejos
# =====================================================

def as_cmat(x, name="M", square=False):
    """Convierte a ndarray complex128 2-D, finito y no vacío."""
    M = np.asarray(x, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] == 0 or M.shape[1] == 0:
        raise ValidationError(f"{name}: se esperaba una matriz 2-D no vacía, forma {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name}: contiene valores no finitos")
    if square and M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name}: se esperaba una matriz cuadrada, forma {M.shape}")
    return M


def as_cvec(x, name="f"):
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] == 0:
        raise ValidationError(f"{name}: se esperaba un vector 1-D no vacío, forma {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name}: contiene valores no finitos")
    return v


def same_square(*mats, names=None):
    """Comprueba que todas las matrices sean d×d con el mismo d y devuelve d."""
    names = names or [f"M{i}" for i in range(len(mats))]
    d = None
    for M, n in zip(mats, names):
        if M.shape[0] != M.shape[1]:
            raise DimensionError(f"{n}: se esperaba una matriz cuadrada, forma {M.shape}")
        if d is None:
            d = M.shape[0]
        elif M.shape[0] != d:
            raise DimensionError(f"{n}: dimensión {M.shape[0]} distinta de {d}")
    return d


def dagger(M):
    return np.conj(M).T


# =====================================================
# Normas, trazas y desigualdades elementales
# =====================================================

def frobenius_norm(M):
    M = as_cmat(M)
    return float(np.sqrt(np.sum(np.abs(M) ** 2)))


def trace_product(M, K):
    """Tr(MK) para matrices d×d."""
    M = as_cmat(M, "M")
    K = as_cmat(K, "K")
    same_square(M, K, names=["M", "K"])
    # Tr(MK) = sum_ij M_ij K_ji
    return complex(np.sum(M * K.T))


def sum_bound(a):
    """|sum a|^2 y su cota d·sum|a|^2 (vector) o d^2·sum|a|^2 (matriz cuadrada)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 2:
        lhs = abs(np.sum(a)) ** 2
        rhs = a.shape[0] ** 2 * np.sum(np.abs(a) ** 2)
    else:
        lhs = abs(np.sum(a)) ** 2
        rhs = a.shape[0] * np.sum(np.abs(a) ** 2)
    return float(lhs), float(rhs)


@njit
def bilinear_value(theta, a, b):
    """|sum_rs theta_rs a_r b_s| (versión Numba)"""
    acc = 0j
    for r in range(theta.shape[0]):
        row = 0j
        for s in range(theta.shape[1]):
            row += theta[r, s] * b[s]
        acc += a[r] * row
    return abs(acc)


# =====================================================
# Constructores con nombre
# =====================================================

def fourier_matrix(d):
    if d < 1:
        raise ValidationError(f"d={d} debe ser >= 1")
    r = np.arange(d)
    # exponente reducido módulo d para no perder precisión en omega^{rs}
    phase = np.outer(r, r) % d
    return np.exp(2j * np.pi * phase / d) / np.sqrt(d)


def ones_objects(d):
    """Vector normalizado de unos |J> y matriz de unos J_d."""
    if d < 1:
        raise ValidationError(f"d={d} debe ser >= 1")
    J_vec = np.full(d, 1.0 / np.sqrt(d), dtype=np.complex128)
    J_mat = np.ones((d, d), dtype=np.complex128)
    return J_vec, J_mat


@dataclass(frozen=True)
class PermSpec:
    map: tuple

    def __post_init__(self):
        m = tuple(int(i) for i in self.map)
        if len(m) == 0 or sorted(m) != list(range(len(m))):
            raise ValidationError(f"permutación inválida: {self.map}")
        object.__setattr__(self, "map", m)

    @property
    def d(self):
        return len(self.map)

    def __call__(self, i):
        return self.map[i]

    def compose(self, other):
        """(self ∘ other)(i) = self(other(i))"""
        if other.d != self.d:
            raise DimensionError(f"permutaciones de tamaños {self.d} y {other.d}")
        return PermSpec(tuple(self.map[j] for j in other.map))

    def inverse(self):
        inv = [0] * self.d
        for i, j in enumerate(self.map):
            inv[j] = i
        return PermSpec(tuple(inv))

    @classmethod
    def identity(cls, d):
        return cls(tuple(range(d)))


def random_permutation(d, rng):
    return PermSpec(tuple(int(i) for i in rng.permutation(d)))


def permutation_matrix(p):
    """[M(pi)]_ij = delta(i, pi(j))"""
    d = p.d
    M = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        M[p(j), j] = 1.0
    return M


def permute_conjugate(theta, p):
    """M(pi)^† theta M(pi); la entrada (i, j) es theta[pi(i), pi(j)]."""
    theta = as_cmat(theta, "theta", square=True)
    if theta.shape[0] != p.d:
        raise DimensionError(f"theta es {theta.shape[0]}×{theta.shape[0]} y la permutación actúa sobre {p.d}")
    P = permutation_matrix(p)
    return dagger(P) @ theta @ P


# =====================================================
# Valores singulares y espectro
# =====================================================

def singular_values(M):
    """Valores singulares en orden decreciente.

    Usa gesdd y, si LAPACK no converge, repite con gesvd (bidiagonalización
    directa, sin formar M^†M).
    """
    M = as_cmat(M)
    try:
        return sla.svd(M, compute_uv=False, lapack_driver="gesdd")
    except (sla.LinAlgError, ValueError) as exc:
        logger.warning(">> gesdd falló (%s); reintento con gesvd", exc)
    try:
        return sla.svd(M, compute_uv=False, lapack_driver="gesvd")
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericalError(
            "la descomposición en valores singulares no convergió",
            diagnostics={"shape": list(M.shape),
                         "frobenius": frobenius_norm(M),
                         "drivers": ["gesdd", "gesvd"],
                         "cause": str(exc)},
        ) from exc


def max_singular_value(M):
    return float(singular_values(M)[0])


def eigen_max_modulus(M):
    """e_max = max |autovalor|."""
    M = as_cmat(M, square=True)
    try:
        ev = sla.eigvals(M)
    except sla.LinAlgError as exc:
        raise NumericalError("el cálculo de autovalores no convergió",
                             diagnostics={"shape": list(M.shape)}) from exc
    return float(np.max(np.abs(ev)))


@dataclass(frozen=True)
class MatrixFlags:
    normal: bool
    unitary: bool
    projector: bool

    def to_dict(self):
        return {"normal": self.normal, "unitary": self.unitary, "projector": self.projector}


def matrix_flags(M, tol=DEFAULT_TOL):
    M = as_cmat(M, square=True)
    Md = dagger(M)
    eye = np.eye(M.shape[0])
    normal = np.linalg.norm(M @ Md - Md @ M) <= tol
    unitary = np.linalg.norm(M @ Md - eye) <= tol
    projector = (np.linalg.norm(M @ M - M) <= tol) and (np.linalg.norm(M - Md) <= tol)
    return MatrixFlags(bool(normal), bool(unitary), bool(projector))


# =====================================================
# Muestreo aleatorio
# =====================================================

def random_complex_matrix(d, rng, cols=None):
    """Matriz de Ginibre compleja (entradas gaussianas de varianza 1)."""
    cols = d if cols is None else cols
    return (rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))) / np.sqrt(2)


def random_unitary(d, rng):
    """Unitaria Haar: QR de una matriz de Ginibre corrigiendo las fases de diag(R)."""
    Z = random_complex_matrix(d, rng)
    Q, R = sla.qr(Z)
    diag = np.diag(R)
    ph = np.where(np.abs(diag) > 0, diag / np.where(np.abs(diag) > 0, np.abs(diag), 1.0), 1.0)
    return Q * ph
