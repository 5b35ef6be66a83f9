# commands/tunnel.py
# tunnel --m --k --V0 --a [--exdc-B B]

import logging

from systems.exdc import exdc_report
from systems.tunnelling import BarrierParams, flux_currents, scattering_amplitudes, tunnel_blocks, tunnel_states

logger = logging.getLogger(__name__)


def run(args):
    p = BarrierParams(m=args.m, k=args.k, V0=args.V0, a=args.a)
    amps = scattering_amplitudes(p)
    blocks = tunnel_blocks(p, amps)
    j_left, j_right = flux_currents(p, amps)

    # Sin --exdc-B se toma |B| de la barrera
    if args.exdc_B is not None:
        exdc = exdc_report(args.exdc_B, p.m_over_k).to_dict()
    elif 0.0 < abs(amps.B) <= 1.0:
        exdc = exdc_report(abs(amps.B), p.m_over_k).to_dict()
    else:
        # barrera tan fina que B se redondea a 0: la plantilla exDC no está definida
        logger.warning(">> |B| = %.6g fuera de (0, 1]; se omite la ventana exDC", abs(amps.B))
        exdc = {"degenerate": True, "B": float(abs(amps.B)),
                "note": "|B| fuera de (0, 1]: sin ventana exDC"}

    return {
        "params": dict(p.to_dict(), E=p.E),
        "amplitudes": amps.to_dict(),
        "currents": {"left": j_left, "right": j_right},
        "norm_ratio": tunnel_states(p, amps).norm_ratio,
        "blocks": blocks.to_dict(),
        "exdc": exdc,
    }
