# Constantes numéricas y valores por defecto

import os

KG_UPPER = 1.4049  # Cota superior publicada de la constante de Grothendieck compleja

DEFAULT_TOL = 1e-9   # Tolerancia de predicados (normal, unitaria, proyector, S_d)
STRUCT_TOL = 1e-12   # Tolerancia estructural (módulos unitarios, identidades exactas)
RESIDUAL_TOL = 1e-10

DEFAULT_SEED = 42
DEFAULT_RESTARTS = 64
DEFAULT_MAX_ITERS = 500
ASCENT_REL_TOL = 1e-12
ULTRA_RESTARTS = 200

# Malla para la búsqueda exhaustiva (d -> K)
GRID_K = {1: 16, 2: 16, 3: 8}
GRID_MAX_DIM = 3
GRID_MIN_K = 8

DEGENERATE_DENOM = 1e-14
SAMPLE_SHARD = 10_000

DEBUG_MONOTONE = os.environ.get("GROTHENDIECK_DEBUG", "0") == "1"
