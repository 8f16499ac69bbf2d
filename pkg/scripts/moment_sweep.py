"""Mean photon number and Mandel Q against squeezing.

Prints the closed-form normally ordered statistics of the Bogoliubov mode B
(thermal state of a) and of a (thermal state of B), with the Fock oracle
as a spot check every few rows.
"""

import argparse
import math

import numpy as np

from qphase.core import StateParams
from qphase.fockoracle import adaptive_cutoff, build_operators, oracle_ordered_moments, rho_a, rho_b
from qphase.moments import mandel_q, mean_number, variance_p1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=complex, default=0.5 + 0j)
    ap.add_argument("--phi", type=float, default=0.0)
    ap.add_argument("--nbar", type=float, default=0.2)
    ap.add_argument("--rmax", type=float, default=1.0)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--oracle-every", type=int, default=5)
    args = ap.parse_args()

    print(f"{'r':>6} {'<N_B>':>10} {'var_B':>10} {'Q_B':>8} {'<N_a>':>10} {'var_a':>10} {'Q_a':>8}  oracle dev")
    for i, r in enumerate(np.linspace(0.0, args.rmax, args.steps)):
        params = StateParams.make(alpha=args.alpha, r=float(r), phi=args.phi, n_bar=args.nbar)
        row = []
        for op in ("B", "a"):
            row += [mean_number(params, 1.0, op), variance_p1(params, op), mandel_q(params, op)]
        dev = ""
        if args.oracle_every and i % args.oracle_every == 0:
            n = adaptive_cutoff(params)
            ops = build_operators(params, n)
            ob = oracle_ordered_moments(rho_a(args.nbar, n), ops.b_mat, 1.0)
            oa = oracle_ordered_moments(rho_b(params, n, ops), ops.a_mat, 1.0)
            worst = max(abs(ob[0] - row[0]), abs(ob[1] - row[1]), abs(oa[0] - row[3]), abs(oa[1] - row[4]))
            dev = f"{worst:.1e} (N={n})"
        print(f"{r:6.2f} " + " ".join(f"{v:10.5f}" if k % 3 != 2 else f"{v:8.4f}"
                                       for k, v in enumerate(row)) + f"  {dev}")
    if math.isclose(abs(args.alpha), 0.0):
        print("(alpha = 0: the two columns coincide)")


if __name__ == "__main__":
    main()
