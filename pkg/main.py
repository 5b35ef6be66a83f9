# main.py
# Punto de entrada: python main.py {certify,forms,tunnel,ultra} ...

import argparse
import json
import logging
import sys

from commands import certify, forms, tunnel, ultra
from commands.output import emit
from config import DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TOL, ULTRA_RESTARTS
from utils.errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

# === Mapeo de sub-comandos ===
command_map = {
    "certify": certify.run,
    "forms": forms.run,
    "tunnel": tunnel.run,
    "ultra": ultra.run,
}

default_restarts = {"ultra": ULTRA_RESTARTS}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--restarts", type=int, default=None,
                        help=f"reinicios del ascenso (por defecto {DEFAULT_RESTARTS}; {ULTRA_RESTARTS} en ultra)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="fichero de salida (por defecto stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="grothendieck", description="Formalismo de la cota de Grothendieck")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="analiza una matriz theta")
    p.add_argument("matrix")
    p.add_argument("--lambda", dest="lam", type=float, default=None)

    p = sub.add_parser("forms", parents=[common], help="evalúa C(theta) y/o Q(theta)")
    p.add_argument("--theta", required=True)
    p.add_argument("--V", default=None)
    p.add_argument("--W", default=None)
    p.add_argument("--a", default=None, help="coeficientes separados por comas o fichero {\"coeffs\": ...}")
    p.add_argument("--b", default=None)

    p = sub.add_parser("tunnel", parents=[common], help="barrera cuadrada y ventana exDC")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--V0", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--exdc-B", dest="exdc_B", type=float, default=None)

    p = sub.add_parser("ultra", parents=[common], help="proyector Pi(z) de 6×6")
    p.add_argument("--phase", type=float, required=True)
    p.add_argument("--xi", type=float, default=None)
    return parser


def _fail(kind, exc, code):
    message = " ".join(str(exc).split())
    sys.stderr.write(f"error={kind} message={message}\n")
    return code


def main(argv=None, stdout=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.restarts is None:
        args.restarts = default_restarts.get(args.command, DEFAULT_RESTARTS)

    try:
        if args.restarts < 0:
            raise ValidationError(f"--restarts debe ser >= 0: {args.restarts}")
        if not args.tol > 0:
            raise ValidationError(f"--tol debe ser positivo: {args.tol}")
        report = command_map[args.command](args)
        report["seed"] = args.seed
        report["restarts"] = args.restarts
        emit(report, args.format, args.output, stdout or sys.stdout)
    except ValidationError as exc:
        return _fail("validation", exc, EXIT_VALIDATION)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail("io", exc, EXIT_VALIDATION)
    except NumericalError as exc:
        logger.debug(">> diagnóstico: %s", exc.diagnostics)
        return _fail("numerical", exc, EXIT_NUMERICAL)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
