# formalism/forms.py

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config import (ASCENT_REL_TOL, DEBUG_MONOTONE, DEFAULT_MAX_ITERS, DEFAULT_RESTARTS,
                    DEFAULT_SEED, DEFAULT_TOL, GRID_K, GRID_MAX_DIM, GRID_MIN_K, KG_UPPER,
                    RESIDUAL_TOL, STRUCT_TOL)
from formalism.optimizer import ascent_kernel, grid_kernel
from formalism.rescaling import (build_dequantisation, capacity, certify, dequantise_matrix,
                                  require_S, rescaling_from_rows)
from utils.errors import DimensionError, NumericalError, ValidationError
from utils.math_utils import (as_cmat, as_cvec, bilinear_value, dagger, eigen_max_modulus,
                              fourier_matrix, frobenius_norm, matrix_flags, max_singular_value,
                              permute_conjugate, same_square)

logger = logging.getLogger(__name__)

CLOSED_FORM = "closed_form"
GRID_REFINED = "grid_refined_exact_target"
ASCENT_LOWER = "ascent_lower_bound"
CERTIFIED_KINDS = (CLOSED_FORM, GRID_REFINED)

IN_G_PRIME = "in_G_prime"
IN_G_MINUS_G_PRIME = "in_G_minus_G_prime"
OUTSIDE_G = "outside_G"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class KGConstant:
    upper: float = KG_UPPER


KG = KGConstant()


# =====================================================
# Tipos de resultado
# =====================================================

@dataclass(frozen=True)
class PhaseAssignment:
    a: np.ndarray
    b: np.ndarray
    value: float

    def recompute(self, theta):
        theta = np.ascontiguousarray(as_cmat(theta, "theta"))
        return float(bilinear_value(theta, self.a, self.b))

    def to_dict(self):
        return {
            "a": [[float(z.real), float(z.imag)] for z in self.a],
            "b": [[float(z.real), float(z.imag)] for z in self.b],
            "value": self.value,
        }


@dataclass(frozen=True)
class OptimizerInfo:
    restarts: int
    max_iters: int
    seed: int
    converged_restarts: int
    grid_K: Optional[int] = None

    def to_dict(self):
        out = {"restarts": self.restarts, "max_iters": self.max_iters,
               "seed": self.seed, "converged_restarts": self.converged_restarts}
        if self.grid_K is not None:
            out["grid_K"] = self.grid_K
        return out


@dataclass(frozen=True)
class AnalyzeOptions:
    restarts: int = DEFAULT_RESTARTS
    max_iters: int = DEFAULT_MAX_ITERS
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    lam: Optional[float] = None
    grid_K: Optional[int] = None


@dataclass(frozen=True)
class GrothendieckReport:
    d: int
    g_est: float
    g_est_kind: str
    g_prime: float
    s_max: float
    witness: PhaseAssignment
    window_lo: float
    window_hi: float
    window_empty: bool
    optimizer: OptimizerInfo
    classification_at: Optional[float] = None
    verdict: Optional[str] = None
    closed_form_source: Optional[str] = None

    @property
    def gap(self):
        """g' − g_est, la brecha empírica (nunca un teorema)."""
        return self.g_prime - self.g_est

    def to_dict(self):
        out = {
            "d": self.d,
            "g_est": self.g_est,
            "g_est_kind": self.g_est_kind,
            "g_prime": self.g_prime,
            "s_max": self.s_max,
            "gap": self.gap,
            "witness": self.witness.to_dict(),
            "window": {"lo": self.window_lo, "hi": self.window_hi,
                       "lo_open": True, "hi_closed": True, "empty": self.window_empty},
            "optimizer": self.optimizer.to_dict(),
        }
        if self.closed_form_source is not None:
            out["closed_form_source"] = self.closed_form_source
        if self.classification_at is not None:
            out["classification"] = {"lambda": self.classification_at, "verdict": self.verdict}
        return out


# =====================================================
# Formas clásica y cuántica
# =====================================================

def _unit_disc(x, name, d):
    x = as_cvec(x, name)
    if x.shape[0] != d:
        raise DimensionError(f"{name} tiene {x.shape[0]} coeficientes, theta es {d}×{d}")
    bad = np.flatnonzero(np.abs(x) > 1.0 + STRUCT_TOL)
    if bad.size:
        raise ValidationError(f"|{name}_{bad[0]}| = {abs(x[bad[0]]):.12g} > 1")
    return x


def classical_form(theta, a, b):
    """C(theta) = |sum_rs theta_rs a_r b_s| con |a_r|, |b_s| <= 1."""
    theta = np.ascontiguousarray(as_cmat(theta, "theta", square=True))
    d = theta.shape[0]
    a = _unit_disc(a, "a", d)
    b = _unit_disc(b, "b", d)
    return float(bilinear_value(theta, a, b))


def classical_form_trace(theta, a, b):
    """La misma forma como |Tr(A(a^*)^† theta A(b))|."""
    theta = as_cmat(theta, "theta", square=True)
    d = theta.shape[0]
    a = _unit_disc(a, "a", d)
    b = _unit_disc(b, "b", d)
    return abs(dequantise_matrix(build_dequantisation(np.conj(a)), theta, build_dequantisation(b)))


def quantum_form(theta, V, W, tol=DEFAULT_TOL, strict=True):
    """Q(theta) = |Tr(theta V W^†)| con V, W en S_d.

    Con strict=False una violación de S_d se registra como aviso y el cálculo sigue.
    """
    theta = as_cmat(theta, "theta")
    V = as_cmat(V, "V")
    W = as_cmat(W, "W")
    same_square(theta, V, W, names=["theta", "V", "W"])
    for M, name in ((V, "V"), (W, "W")):
        cert = certify(M, tol)
        if not cert.in_S:
            if strict:
                raise ValidationError(f"{name} no pertenece a S_d: N({name}) = {cert.capacity:.12g}")
            logger.warning(">> %s fuera de S_d (N = %.6g); Q calculado solo como diagnóstico",
                           name, cert.capacity)
    # Tr(theta V W^†) = sum_ij theta_ij (V W^†)_ji
    return float(abs(np.sum(theta * (V @ dagger(W)).T)))


def quantum_form_vectors(theta, lam, u, mu, v, tol=DEFAULT_TOL):
    """|sum_rs theta_rs lam_r mu_s <u_r|v_s>| con vectores normalizados u_r, v_s."""
    theta = as_cmat(theta, "theta", square=True)
    V = rescaling_from_rows(mu, v, tol).matrix
    W = rescaling_from_rows(lam, u, tol).matrix
    same_square(theta, V, W, names=["theta", "V", "W"])
    value = quantum_form(theta, V, W, tol)
    overlaps = np.conj(as_cmat(u)) @ as_cmat(v).T  # <u_r|v_s>
    direct = abs(np.sum(theta * np.outer(lam, mu) * overlaps))
    if abs(direct - value) > RESIDUAL_TOL * max(1.0, value):
        raise NumericalError("la forma vectorial no coincide con la traza",
                             diagnostics={"direct": float(direct), "trace": value})
    return value


# =====================================================
# Supremos g y g'
# =====================================================

def g_prime(theta):
    """g'(theta) = d·s_max(theta)."""
    theta = as_cmat(theta, "theta", square=True)
    return theta.shape[0] * max_singular_value(theta)


def _phase(z):
    m = np.abs(z)
    return np.where(m > 0, z / np.where(m > 0, m, 1.0), 1.0 + 0j)


@dataclass(frozen=True)
class _AscentResult:
    value: float
    witness: PhaseAssignment
    converged: int


def _run_ascent(theta, a0, max_iters):
    a, b, value, iters, converged, monotone = ascent_kernel(theta, a0, max_iters, ASCENT_REL_TOL)
    if DEBUG_MONOTONE and not monotone:
        raise NumericalError("el ascenso alternado no fue monótono",
                             diagnostics={"iters": int(iters), "value": float(value)})
    if not converged:
        logger.warning(">> ascenso sin converger tras %d iteraciones (valor %.12g)", iters, value)
    return a, b, float(value), bool(converged)


def _ascent(theta, restarts, max_iters, seed, extra_starts=()):
    theta = np.ascontiguousarray(as_cmat(theta, "theta", square=True))
    d = theta.shape[0]
    if frobenius_norm(theta) == 0.0:
        ones = np.ones(d, dtype=np.complex128)
        return _AscentResult(0.0, PhaseAssignment(ones, ones.copy(), 0.0), 0)

    # Arranques deterministas: todo unos y fases conjugadas de las sumas por fila
    starts = [np.ones(d, dtype=np.complex128),
              np.conj(_phase(theta.sum(axis=1))).astype(np.complex128)]
    starts.extend(np.asarray(s, dtype=np.complex128) for s in extra_starts)
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append(np.exp(2j * np.pi * rng.uniform(0.0, 1.0, d)))

    best = None
    converged = 0
    for idx, a0 in enumerate(starts):
        a, b, value, ok = _run_ascent(theta, a0, max_iters)
        converged += ok
        # Reducción lexicográfica (valor, índice): gana el primero en empates
        if best is None or value > best[0]:
            best = (value, idx, a, b)
    value, _, a, b = best
    witness = PhaseAssignment(a, b, float(bilinear_value(theta, a, b)))
    return _AscentResult(witness.value, witness, converged)


def g_ascent(theta, restarts=DEFAULT_RESTARTS, max_iters=DEFAULT_MAX_ITERS, seed=DEFAULT_SEED):
    """Cota inferior certificada de g(theta) por ascenso alternado con reinicios."""
    res = _ascent(theta, restarts, max_iters, seed)
    return res.value, res.witness


def g_ascent_with_info(theta, restarts=DEFAULT_RESTARTS, max_iters=DEFAULT_MAX_ITERS, seed=DEFAULT_SEED):
    res = _ascent(theta, restarts, max_iters, seed)
    return res.value, res.witness, OptimizerInfo(restarts, max_iters, seed, res.converged)


def _grid(theta, K=None, max_iters=DEFAULT_MAX_ITERS):
    theta = np.ascontiguousarray(as_cmat(theta, "theta", square=True))
    d = theta.shape[0]
    if d > GRID_MAX_DIM:
        raise ValidationError(f"g_grid admite d <= {GRID_MAX_DIM}; d = {d}")
    K = GRID_K[d] if K is None else int(K)
    if K < GRID_MIN_K:
        raise ValidationError(f"K = {K} < {GRID_MIN_K}")
    roots = np.exp(2j * np.pi * np.arange(K) / K)
    best, a_grid, _ = grid_kernel(theta, roots)
    a, b, refined, ok = _run_ascent(theta, a_grid, max_iters)
    witness = PhaseAssignment(a, b, float(bilinear_value(theta, a, b)))
    logger.debug(">> malla K=%d: %.12g, refinado: %.12g", K, best, witness.value)
    return max(witness.value, float(best)), witness, K, ok


def g_grid(theta, K=None):
    """Búsqueda exhaustiva en la malla de raíces K-ésimas y refinamiento por ascenso (d <= 3)."""
    value, _, _, _ = _grid(theta, K)
    return value


def _exdc_template(theta, tol):
    if theta.shape != (2, 2):
        return None
    # tolerancias relativas a max|theta|
    scale = float(np.max(np.abs(theta)))
    if np.max(np.abs(theta.imag)) > tol * scale:
        return None
    t = theta.real
    c = t[0, 0]
    if c <= 0:
        return None
    B = t[0, 1] / c
    if not (0 < B <= 1 + tol):
        return None
    if abs(t[1, 0] - c * B) > tol * scale or abs(t[1, 1] - c * B * B) > tol * scale:
        return None
    return c, B


def _closed_form(theta, tol=STRUCT_TOL):
    """(valor, testigo, fuente) o None."""
    theta = as_cmat(theta, "theta", square=True)
    d = theta.shape[0]
    scale = float(np.max(np.abs(theta)))

    off = theta - np.diag(np.diag(theta))
    if np.max(np.abs(off)) <= tol * scale:
        z = np.diag(theta)
        a = np.conj(_phase(z))
        b = np.ones(d, dtype=np.complex128)
        return float(np.sum(np.abs(z))), PhaseAssignment(a, b, float(np.sum(np.abs(z)))), "diagonal"

    exdc = _exdc_template(theta, tol)
    if exdc is not None:
        c, B = exdc
        ones = np.ones(2, dtype=np.complex128)
        value = c * (1.0 + B) ** 2
        return value, PhaseAssignment(ones, ones.copy(), value), "exdc"

    U, s, Vh = np.linalg.svd(theta)
    if d > 1 and s[1] <= 1e-10 * s[0]:
        # theta = s0 u v^†: el óptimo alinea las fases de u y de v
        u, v = U[:, 0], np.conj(Vh[0])
        value = float(s[0] * np.sum(np.abs(u)) * np.sum(np.abs(v)))
        a = np.conj(_phase(u))
        b = _phase(v)
        return value, PhaseAssignment(a, b, value), "rank_one"
    return None


def closed_form_g(theta):
    """g(theta) exacto para matrices diagonales, de rango uno o de la plantilla exDC; None si no aplica."""
    found = _closed_form(theta)
    return None if found is None else found[0]


# =====================================================
# Clasificación y análisis
# =====================================================

def classify(lam, window_lo, window_hi, kind, tol=DEFAULT_TOL):
    """Veredicto para lambda·theta dados 1/g' (window_lo) y 1/g_est (window_hi)."""
    if lam is None or not np.isfinite(lam) or lam <= 0:
        raise ValidationError(f"lambda debe ser un real positivo: {lam!r}")
    if lam <= window_lo * (1.0 + tol):
        return IN_G_PRIME
    if lam <= window_hi:
        # Con g solo acotado por abajo, 1/g_est >= 1/g: no se puede certificar G_d
        return IN_G_MINUS_G_PRIME if kind in CERTIFIED_KINDS else UNKNOWN
    # lambda·g >= lambda·g_est > 1 con g_est alcanzado por el testigo
    return OUTSIDE_G


def analyze(theta, opts=None, **kwargs):
    opts = opts or AnalyzeOptions(**kwargs)
    theta = np.ascontiguousarray(as_cmat(theta, "theta", square=True))
    d = theta.shape[0]
    if frobenius_norm(theta) == 0.0:
        raise ValidationError("theta es la matriz nula")

    s_max = max_singular_value(theta)
    gp = d * s_max
    grid_K = None
    converged = 0
    source = None

    found = _closed_form(theta)
    if found is not None:
        g_est, witness, source = found
        kind = CLOSED_FORM
    elif d <= GRID_MAX_DIM:
        g_est, witness, grid_K, ok = _grid(theta, opts.grid_K, opts.max_iters)
        converged = int(ok)
        kind = GRID_REFINED
    else:
        res = _ascent(theta, opts.restarts, opts.max_iters, opts.seed)
        g_est, witness, converged = res.value, res.witness, res.converged
        kind = ASCENT_LOWER

    if not g_est > 0:
        raise NumericalError("g_est no es positivo para theta no nula",
                             diagnostics={"g_est": float(g_est), "g_prime": gp, "kind": kind})
    if g_est > gp * (1.0 + DEFAULT_TOL):
        raise NumericalError("g_est supera a g'", diagnostics={"g_est": g_est, "g_prime": gp})
    g_est = min(g_est, gp)

    window_lo = 1.0 / gp
    window_hi = 1.0 / g_est
    window_empty = g_est >= gp * (1.0 - opts.tol)
    if window_empty:
        window_hi = window_lo

    verdict = None
    if opts.lam is not None:
        verdict = classify(opts.lam, window_lo, window_hi, kind, opts.tol)

    logger.info(">> d=%d g_est=%.12g (%s) g'=%.12g", d, g_est, kind, gp)
    return GrothendieckReport(
        d=d, g_est=float(g_est), g_est_kind=kind, g_prime=float(gp), s_max=float(s_max),
        witness=witness, window_lo=float(window_lo), window_hi=float(window_hi),
        window_empty=bool(window_empty),
        optimizer=OptimizerInfo(opts.restarts, opts.max_iters, opts.seed, converged, grid_K),
        classification_at=opts.lam, verdict=verdict, closed_form_source=source,
    )


def normalized_Q(theta, V, W, g_value):
    """|Tr((theta/g)(V/N(V))(W/N(W))^†)|; <= k_G cuando g_value es g(theta) certificado."""
    theta = as_cmat(theta, "theta")
    V = as_cmat(V, "V")
    W = as_cmat(W, "W")
    same_square(theta, V, W, names=["theta", "V", "W"])
    if not g_value > 0:
        raise ValidationError(f"g_value debe ser positivo: {g_value!r}")
    nV, nW = capacity(V), capacity(W)
    if nV == 0.0 or nW == 0.0:
        raise ValidationError("capacidad nula en V o W")
    return quantum_form(theta / g_value, V / nV, W / nW)


# =====================================================
# Condición necesaria para Q > 1 (theta normal)
# =====================================================

@dataclass(frozen=True)
class NecessaryConditionVerdict:
    lam: float
    e_max: float
    g_est: float
    g_est_kind: str
    window_lo: float
    window_hi: float
    strict_gap: bool
    in_window: bool
    has_off_diagonal: bool
    proper_rescaling: bool
    q_le_one_guaranteed: bool
    q_value: float
    notes: list = field(default_factory=list)

    @property
    def requirements(self):
        return (self.strict_gap and self.in_window, self.has_off_diagonal, self.proper_rescaling)

    @property
    def all_hold(self):
        return all(self.requirements)

    def to_dict(self):
        r1, r2, r3 = self.requirements
        return {
            "lambda": self.lam, "e_max": self.e_max, "g_est": self.g_est,
            "g_est_kind": self.g_est_kind,
            "window": {"lo": self.window_lo, "hi": self.window_hi},
            "requirements": {"window": r1, "off_diagonal": r2, "proper_rescaling": r3},
            "all_hold": self.all_hold, "sufficient": False,
            "q_le_one_guaranteed": self.q_le_one_guaranteed,
            "q_value": self.q_value, "notes": list(self.notes),
        }


def necessary_condition_report(theta, lam, V, W, tol=DEFAULT_TOL, opts=None):
    theta = as_cmat(theta, "theta", square=True)
    d = same_square(theta, as_cmat(V, "V"), as_cmat(W, "W"), names=["theta", "V", "W"])
    if not matrix_flags(theta, tol).normal:
        raise ValidationError("theta no es normal")
    if not lam > 0:
        raise ValidationError(f"lambda debe ser positivo: {lam!r}")
    cV = require_S(V, "V", tol)
    cW = require_S(W, "W", tol)

    e_max = eigen_max_modulus(theta)
    report = analyze(theta, opts or AnalyzeOptions(tol=tol))
    g_est = report.g_est
    de = d * e_max

    strict_gap = g_est < de * (1.0 - tol)
    lo, hi = 1.0 / de, 1.0 / g_est
    in_window = lo < lam <= hi * (1.0 + 1e-12)
    scaled = lam * theta
    off = scaled - np.diag(np.diag(scaled))
    has_off = bool(np.max(np.abs(off)) > tol * np.max(np.abs(scaled)))
    proper = cV.proper or cW.proper
    guaranteed = lam <= lo * (1.0 + tol)
    q = quantum_form(scaled, cV.matrix, cW.matrix, tol)

    notes = ["los requisitos son necesarios pero no suficientes para Q > 1"]
    if not strict_gap:
        notes.append("g = d·e_max: no hay ventana ultra-cuántica")
    if not has_off:
        notes.append("theta diagonal: toda matriz diagonal da Q <= 1")
    if not proper:
        notes.append("V y W son de decuantización: Q coincide con la forma clásica <= 1")
    if report.g_est_kind == ASCENT_LOWER:
        notes.append("g solo acotado por abajo: la pertenencia a G_d no está certificada")
    if guaranteed:
        notes.append("lambda <= 1/(d·e_max): Q <= 1 garantizado")

    return NecessaryConditionVerdict(
        lam=float(lam), e_max=e_max, g_est=g_est, g_est_kind=report.g_est_kind,
        window_lo=lo, window_hi=hi, strict_gap=bool(strict_gap), in_window=bool(in_window),
        has_off_diagonal=has_off, proper_rescaling=bool(proper),
        q_le_one_guaranteed=bool(guaranteed), q_value=q, notes=notes,
    )


# =====================================================
# Invariancias
# =====================================================

def permutation_invariance_check(theta, V, W, p, tol=RESIDUAL_TOL):
    theta = as_cmat(theta, "theta")
    V = as_cmat(V, "V")
    W = as_cmat(W, "W")
    same_square(theta, V, W, names=["theta", "V", "W"])

    def q(t, v, w):
        return abs(np.sum(t * (v @ dagger(w)).T))

    tp, Vp, Wp = (permute_conjugate(M, p) for M in (theta, V, W))
    ok_q = abs(q(theta, V, W) - q(tp, Vp, Wp)) <= tol * max(1.0, q(theta, V, W))
    gp0 = g_prime(theta)
    ok_g = abs(gp0 - g_prime(tp)) <= DEFAULT_TOL * max(1.0, gp0)
    # mismas entradas reordenadas: solo cambia el orden de la suma
    ok_cap = all(abs(capacity(A) - capacity(B)) <= 1e-14 * max(1.0, capacity(A))
                 for A, B in ((V, Vp), (W, Wp)))
    if not (ok_q and ok_g and ok_cap):
        logger.warning(">> invariancia por permutación rota: Q=%s g'=%s N=%s", ok_q, ok_g, ok_cap)
    return bool(ok_q and ok_g and ok_cap)


def fourier_dual(theta):
    """F theta F^†."""
    theta = as_cmat(theta, "theta", square=True)
    F = fourier_matrix(theta.shape[0])
    return F @ theta @ dagger(F)


def rank_one_trace_ratio(f, g, U):
    """|Tr(theta U)| / g(theta) para theta = |f><g|."""
    f = as_cvec(f, "f")
    g = as_cvec(g, "g")
    U = as_cmat(U, "U", square=True)
    theta = np.outer(f, np.conj(g))
    same_square(theta, U, names=["theta", "U"])
    g_value = closed_form_g(theta)
    if g_value is None or g_value == 0.0:
        raise ValidationError("theta no es de rango uno no nulo")
    return abs(np.trace(theta @ U)) / g_value
