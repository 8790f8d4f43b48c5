"""Sweep the isotropic family and locate where detection switches on.

For each (d, M) the correlation measure is computed on a gamma grid, both
numerically and in closed form, and the smallest flagged gamma is compared
with 1/M. Also reports the gap to the known separability threshold
1/(d+1) of isotropic states.

    python3 scripts/isotropic_sweep.py --d 2 3 4 --points 201
"""

import argparse

import numpy as np

from mumkit.entangle import (
    conjugate_mum,
    correlation_measure,
    detect,
    isotropic_j_closed_form,
    isotropic_state,
)
from mumkit.mum import build_mum_set


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--points", type=int, default=201)
    ap.add_argument("--t", type=float, default=None, help="MUM parameter (default: t_hi)")
    args = ap.parse_args()

    gammas = np.linspace(0, 1, args.points)
    print(f"{'d':>3} {'M':>3} {'kappa':>10} {'1/M':>8} {'first flag':>10} "
          f"{'1/(d+1)':>8} {'undetected width':>16} {'max |J-closed|':>14}")
    for d in args.d:
        for M in range(2, d + 2):
            A = build_mum_set(d, args.t, M)
            B = conjugate_mum(A)
            first, err = None, 0.0
            for g in gammas:
                state = isotropic_state(d, float(g))
                err = max(err, abs(correlation_measure(A, B, state)
                                   - isotropic_j_closed_form(M, d, A.kappa, float(g))))
                if first is None and detect(A, B, state).entangled:
                    first = float(g)
            # entangled isotropic states missed by the test: gamma in (1/(d+1), 1/M]
            width = 1 / M - 1 / (d + 1)
            shown = f"{first:.5f}" if first is not None else "none"
            print(f"{d:>3} {M:>3} {A.kappa:>10.6f} {1 / M:>8.5f} {shown:>10} "
                  f"{1 / (d + 1):>8.5f} {width:>16.5f} {err:>14.2e}")


if __name__ == "__main__":
    main()
