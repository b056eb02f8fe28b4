"""Vacuum current of the Klein step and the wide barrier against step height."""
import argparse

import numpy as np
from scipy.integrate import quad

from kleinlab.analytic import mean_transmission
from kleinlab.vacuum import klein_range_integral


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--V-max", type=float, default=6.0)
    ap.add_argument("--points", type=int, default=17)
    args = ap.parse_args()

    print("V/m,step,step_check,barrier_T_inf,barrier_mean")
    for V in np.linspace(2.0, args.V_max, args.points)[1:]:
        step = -klein_range_integral("step", V)
        check = -klein_range_integral("step", V, method="gauss")
        barrier = -klein_range_integral("barrier", V)
        mean = -quad(mean_transmission, 1.0, V - 1.0, args=(V,), epsrel=1e-11)[0]
        print(f"{V:.4f},{step:.12f},{check:.12f},{barrier:.12f},{mean:.12f}")


if __name__ == "__main__":
    main()
