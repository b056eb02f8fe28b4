"""Step transmission T_S(V) at fixed E as the step grows, against its limit."""
import argparse
import math

import numpy as np

from kleinlab import Step, UnitSystem, step_coefficients


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--E", type=float, default=2.0)
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--decades", type=int, default=6)
    args = ap.parse_args()

    units = UnitSystem(args.mass)
    E, m = args.E, args.mass
    k_inf = math.sqrt((E + m) / (E - m))
    limit = 4 * k_inf / (1 + k_inf) ** 2
    print(f"# E = {E} m, limit 4k/(1+k)^2 = {limit:.12f}")
    print("V/m,T_S,T_S-limit")
    for V in np.logspace(math.log10(E + m) + 0.05, math.log10(E + m) + args.decades, 4 * args.decades):
        T = step_coefficients(E, Step(V * m), units).T
        print(f"{V:.6g},{T:.12f},{T - limit:+.3e}")


if __name__ == "__main__":
    main()
