"""Scan the minimum of W(eta, p) over squeezing and ordering.

For the Gaussian family the Wigner and Q functions never go negative; the
scan shows where the P function stops existing (validity condition fails).
"""

import argparse

import numpy as np

from qphase.core import StateParams
from qphase.quasiprob import SingularDistributionError, w_closed_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nbar", type=float, default=0.1)
    ap.add_argument("--phi", type=float, default=0.0)
    ap.add_argument("--samples", type=int, default=128)
    args = ap.parse_args()

    rs = np.concatenate([[0.0, 0.05, 0.09, 0.1], np.linspace(0.25, 1.5, 6)])
    ps = (1.0, 0.5, 0.0, -0.5, -1.0)
    print("min W (or 'singular') over the default grid; rows r, columns p")
    print(f"{'r':>6} " + " ".join(f"{p:>12g}" for p in ps))
    for r in rs:
        params = StateParams.make(r=float(r), phi=args.phi, n_bar=args.nbar)
        cells = []
        for p in ps:
            try:
                w = w_closed_grid(params, p)
                cells.append(f"{w.values.min():12.3e}")
            except SingularDistributionError:
                cells.append(f"{'singular':>12}")
        print(f"{r:6.2f} " + " ".join(cells))
    # the squeeze form has eigenvalues exp(+-2r): P exists iff (n_bar + 1/2) exp(-2r) > 1/2
    r_star = 0.5 * np.log(2 * args.nbar + 1)
    print(f"P function exists for r < {r_star:.4f} at n_bar = {args.nbar:g}")


if __name__ == "__main__":
    main()
