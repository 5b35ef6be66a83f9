# formalism/optimizer.py

import numpy as np
from numba import njit

from utils.math_utils import bilinear_value


# =====================================================
# Ascenso alternado de fases sobre el toro
# =====================================================

@njit
def ascent_kernel(theta, a0, max_iters, rel_tol):
    """Maximiza |a^T theta b| alternando b <- fase conjugada de (a^T theta), a <- fase conjugada de (theta b).

    Devuelve (a, b, valor, iteraciones, convergió, monótono).
    """
    d_rows, d_cols = theta.shape
    a = a0.copy()
    b = np.ones(d_cols, dtype=np.complex128)
    prev = 0.0
    iters = 0
    converged = False
    monotone = True

    for it in range(max_iters):
        iters = it + 1

        # Paso en b
        for s in range(d_cols):
            w = 0j
            for r in range(d_rows):
                w += a[r] * theta[r, s]
            m = abs(w)
            if m > 0.0:  # con w_s = 0 cualquier fase es óptima: se deja b_s
                b[s] = np.conj(w) / m
        value_b = bilinear_value(theta, a, b)

        # Paso en a
        for r in range(d_rows):
            u = 0j
            for s in range(d_cols):
                u += theta[r, s] * b[s]
            m = abs(u)
            if m > 0.0:
                a[r] = np.conj(u) / m
        value_a = bilinear_value(theta, a, b)

        slack = 1e-13 * value_a
        if value_b < prev - slack or value_a < value_b - slack:
            monotone = False

        if it > 0 and value_a - prev <= rel_tol * max(prev, 1e-300):
            prev = max(prev, value_a)
            converged = True
            break
        prev = max(prev, value_a)

    return a, b, prev, iters, converged, monotone


# =====================================================
# Búsqueda exhaustiva en la malla de raíces de la unidad
# =====================================================

@njit
def grid_kernel(theta, roots):
    """Recorre a_r, b_s en las K raíces de la unidad con a_0 = 1.

    |a^T theta b| es invariante ante una fase global de a y la malla es
    cerrada bajo multiplicación por raíces, así que fijar a_0 no pierde puntos.
    """
    d = theta.shape[0]
    K = roots.shape[0]
    n_free = 2 * d - 1
    total = 1
    for _ in range(n_free):
        total *= K

    a = np.ones(d, dtype=np.complex128)
    b = np.ones(d, dtype=np.complex128)
    best = -1.0
    best_idx = 0
    for idx in range(total):
        rem = idx
        for r in range(1, d):
            a[r] = roots[rem % K]
            rem //= K
        for s in range(d):
            b[s] = roots[rem % K]
            rem //= K
        v = bilinear_value(theta, a, b)
        if v > best:
            best = v
            best_idx = idx

    rem = best_idx
    for r in range(1, d):
        a[r] = roots[rem % K]
        rem //= K
    for s in range(d):
        b[s] = roots[rem % K]
        rem //= K
    return best, a, b
