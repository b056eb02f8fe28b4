"""Scan barrier transmission across the Klein zone and mark the resonances.

Writes E, T (closed form), T (transfer matrix) and the phase-averaged
values T_inf and 2k/(1+k^2) to CSV for plotting.
"""
import argparse
import csv
import sys

import numpy as np

from kleinlab import Barrier, averaged_coefficients, barrier_coefficients, mean_transmission, resonance_energies
from kleinlab.solver import solve_scattering


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--V", type=float, default=4.0)
    ap.add_argument("--a", type=float, default=np.pi / 2)
    ap.add_argument("--points", type=int, default=500)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    barrier = Barrier(args.V, args.a)
    res = resonance_energies(barrier)
    print("# resonances: " + ", ".join(f"N={N} E={E:.10f}" for N, E in res), file=sys.stderr)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["E", "T", "T_solver", "T_inf", "T_mean"])
    for E in np.linspace(1.001, args.V - 1.001, args.points):
        T = barrier_coefficients(E, barrier).T
        T_num = solve_scattering(barrier, E).result.T
        w.writerow([f"{E:.10g}", f"{T:.15g}", f"{T_num:.15g}",
                    f"{averaged_coefficients(E, args.V)[1]:.15g}", f"{mean_transmission(E, args.V):.15g}"])
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
