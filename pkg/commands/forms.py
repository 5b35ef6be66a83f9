# commands/forms.py
# forms --theta f [--V f --W f | --a lista|fichero --b lista|fichero]: valores de C y/o Q

import os

import numpy as np

from formalism.forms import classical_form, g_prime, quantum_form
from utils.errors import ValidationError
from utils.matrix_io import load_coeffs, load_matrix


def parse_complex_list(text, name):
    """'1,1j,0.5-0.5j' -> array complejo."""
    try:
        values = [complex(tok.strip().replace("i", "j")) for tok in text.split(",")]
    except ValueError:
        raise ValidationError(f"--{name}: lista de complejos inválida {text!r}") from None
    return np.array(values, dtype=np.complex128)


def coefficients(text, name):
    """Lista separada por comas o fichero {"coeffs": [[re, im], ...]}."""
    if os.path.isfile(text):
        return load_coeffs(text)
    return parse_complex_list(text, name)


def run(args):
    theta = load_matrix(args.theta)
    has_q = args.V is not None or args.W is not None
    has_c = args.a is not None or args.b is not None
    if not (has_q or has_c):
        raise ValidationError("se requiere --V/--W o --a/--b")

    out = {"d": int(theta.shape[0]), "g_prime": g_prime(theta)}
    if has_q:
        if args.V is None or args.W is None:
            raise ValidationError("--V y --W van juntos")
        out["Q"] = quantum_form(theta, load_matrix(args.V), load_matrix(args.W), args.tol)
    if has_c:
        if args.a is None or args.b is None:
            raise ValidationError("--a y --b van juntos")
        out["C"] = classical_form(theta, coefficients(args.a, "a"), coefficients(args.b, "b"))
    return out
