"""Convergence of the Fock oracle with the truncation size.

Prints |chi_a - oracle| and |chi_b - oracle| at a fixed xi for a ladder of
cutoffs, next to the cutoff that adaptive_cutoff picks.
"""

import argparse
import math
import warnings

from qphase.charfn import chi_a, chi_b
from qphase.core import StateParams
from qphase.fockoracle import (
    CutoffError,
    UntrustedOracleWarning,
    adaptive_cutoff,
    build_operators,
    oracle_chi,
    rho_a,
    rho_b,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=complex, default=0.3 - 0.2j)
    ap.add_argument("--r", type=float, default=0.6)
    ap.add_argument("--phi", type=float, default=math.pi / 3)
    ap.add_argument("--nbar", type=float, default=0.5)
    ap.add_argument("--xi", type=complex, default=0.5 + 0.5j)
    ap.add_argument("--p", type=float, default=0.0)
    args = ap.parse_args()

    params = StateParams.make(alpha=args.alpha, r=args.r, phi=args.phi, n_bar=args.nbar)
    print(f"adaptive cutoff: {adaptive_cutoff(params)}")
    print(f"{'N':>5} {'err chi_a':>12} {'err chi_b':>12}")
    warnings.simplefilter("ignore", UntrustedOracleWarning)
    for n in (16, 24, 32, 48, 64, 96, 128, 192, 256):
        try:
            ops = build_operators(params, n)
            ea = abs(oracle_chi(rho_a(args.nbar, n), (ops.b_mat, ops.bdag_mat), args.xi, args.p)
                     - chi_a(args.xi, params, args.p))
        except CutoffError:
            print(f"{n:>5} {'-':>12} {'-':>12}  (thermal tail too heavy)")
            continue
        try:
            rb = rho_b(params, n, ops, tol=1.0)  # report the error even when the tail is heavy
            eb = abs(oracle_chi(rb, (ops.a_mat, ops.adag_mat), args.xi, args.p)
                     - chi_b(args.xi, params, args.p))
            eb_s = f"{eb:12.3e}"
        except CutoffError:
            eb_s = f"{'-':>12}"
        print(f"{n:>5} {ea:12.3e} {eb_s}")


if __name__ == "__main__":
    main()
