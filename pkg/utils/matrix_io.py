# utils/matrix_io.py
# Formato JSON compartido: {"rows": d, "cols": d, "data": [[re, im], ...]} en orden fila-mayor

import json
import math

import numpy as np

from utils.errors import ValidationError
from utils.math_utils import as_cmat


def _pair(entry, where):
    if not isinstance(entry, (list, tuple)) or len(entry) != 2:
        raise ValidationError(f"{where}: se esperaba un par [re, im], llegó {entry!r}")
    re, im = entry
    if isinstance(re, bool) or isinstance(im, bool) \
            or not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise ValidationError(f"{where}: componentes no numéricas {entry!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ValidationError(f"{where}: valor no finito {entry!r}")
    return complex(re, im)


def matrix_from_dict(doc):
    if not isinstance(doc, dict):
        raise ValidationError("el documento de matriz debe ser un objeto JSON")
    try:
        rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    except KeyError as exc:
        raise ValidationError(f"falta el campo {exc.args[0]!r}") from None
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise ValidationError(f"rows/cols deben ser enteros positivos: {rows!r}, {cols!r}")
    if not isinstance(data, list) or len(data) != rows * cols:
        n = len(data) if isinstance(data, list) else "?"
        raise ValidationError(f"data tiene {n} entradas, se esperaban {rows * cols}")
    values = [_pair(e, f"data[{i}]") for i, e in enumerate(data)]
    return np.array(values, dtype=np.complex128).reshape(rows, cols)


def matrix_to_dict(M):
    M = as_cmat(M)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def coeffs_from_dict(doc):
    """DequantSpec serializado: {"coeffs": [[re, im], ...]}"""
    if not isinstance(doc, dict) or not isinstance(doc.get("coeffs"), list) or not doc["coeffs"]:
        raise ValidationError("se esperaba {\"coeffs\": [[re, im], ...]} no vacío")
    return np.array([_pair(e, f"coeffs[{i}]") for i, e in enumerate(doc["coeffs"])],
                    dtype=np.complex128)


def coeffs_to_dict(coeffs):
    return {"coeffs": [[float(z.real), float(z.imag)] for z in np.asarray(coeffs, dtype=np.complex128)]}


def _load_json(path):
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: JSON mal formado ({exc.msg}, línea {exc.lineno})") from None


def load_matrix(path):
    return matrix_from_dict(_load_json(path))


def load_coeffs(path):
    return coeffs_from_dict(_load_json(path))


def dump_matrix(M, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(matrix_to_dict(M), f, indent=2)
