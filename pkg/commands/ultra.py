# commands/ultra.py
# ultra --phase phi [--xi xi]

from systems.ultraquantum import ultra_window, verify_complementarity, z_from_phase


def run(args):
    z = z_from_phase(args.phase)
    report = ultra_window(z, xi_L=args.xi, restarts=args.restarts, seed=args.seed).to_dict()
    report["complementarity"] = verify_complementarity(z).to_dict()
    return report
