"""Ramp a square well from zero to V_max and list the level crossings.

Each E = 0 crossing adds one unit of particle charge and each dive below
-m one supercritical positron; both are compared with the closed forms.
"""
import argparse

from kleinlab.spectrum import ramp_spectrum, suggested_steps
from kleinlab.supercritical import count_positrons, count_supercritical, critical_potential


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--V-max", type=float, default=4.0)
    ap.add_argument("--a", type=float, default=5.0)
    ap.add_argument("--steps", type=int, default=0)
    args = ap.parse_args()

    steps = args.steps or suggested_steps(args.V_max, args.a)
    flow = ramp_spectrum(args.V_max, steps, args.a)
    print(f"# a = {args.a}, V up to {args.V_max}, {steps} slices")
    print("kind,level,parity,depth,V_N^c")
    n_dive = 0
    for c in flow.crossings:
        ref = ""
        if c.kind == "dive":
            n_dive += 1
            ref = f"{critical_potential(n_dive, args.a):.12f}"
        print(f"{c.kind},{c.level},{c.parity},{c.depth:.12f},{ref}")
    qp, qs = flow.counts_at(args.V_max)
    lo, hi = count_positrons(args.V_max, args.a)
    print(f"# tracked: Q_p = {qp}, Q_S = {qs}")
    print(f"# closed form: Q_S = {count_supercritical(args.V_max, args.a)}, Q_p in [{lo}, {hi}]")


if __name__ == "__main__":
    main()
