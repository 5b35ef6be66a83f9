# commands/certify.py
# certify <matrix.json> [--lambda L]: GrothendieckReport + certificado de reescalado

import logging

from formalism.forms import AnalyzeOptions, analyze
from formalism.rescaling import certify, dequant_coeffs
from utils.matrix_io import coeffs_to_dict, load_matrix

logger = logging.getLogger(__name__)


def run(args):
    theta = load_matrix(args.matrix)
    logger.info(">> certify %s (%d×%d)", args.matrix, *theta.shape)
    opts = AnalyzeOptions(restarts=args.restarts, seed=args.seed, tol=args.tol, lam=args.lam)
    report = analyze(theta, opts).to_dict()
    cert = certify(theta, args.tol)
    report["rescaling"] = cert.to_dict()
    if cert.in_T:
        # theta = A(a): se devuelven los a_r en el formato de DequantSpec
        report["rescaling"].update(coeffs_to_dict(dequant_coeffs(theta, args.tol)))
    return report
