"""How tight are the entropic bounds on random states?

Samples seeded states per dimension and reports the smallest and mean
margin (observed average entropy minus bound) for each family and order.

    python3 scripts/bound_tightness.py --d 2 3 4 --samples 500 --kind pure_random
"""

import argparse
import math

import numpy as np

from mumkit.mum import all_probabilities, build_mum_set
from mumkit.entropy import renyi_entropy, tsallis_entropy
from mumkit.states import StateSpec, generate, purity
from mumkit.uncertainty import (
    RENYI_ALPHAS,
    TSALLIS_ALPHAS,
    renyi_uncertainty_bound,
    tsallis_uncertainty_bound,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--kind", default="mixed_random", choices=["pure_random", "mixed_random"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'d':>3} {'family':>8} {'alpha':>6} {'min margin':>12} {'mean margin':>12}")
    for d in args.d:
        m = build_mum_set(d)
        margins = {}
        for i in range(args.samples):
            rho = generate(StateSpec(args.kind, d, args.seed, i)).matrix
            table, pur = all_probabilities(m, rho), purity(rho)
            for a in RENYI_ALPHAS:
                obs = np.mean([renyi_entropy(p, a) for p in table])
                margins.setdefault(("renyi", a), []).append(
                    obs - renyi_uncertainty_bound(a, m.M, d, m.kappa, pur))
            for a in TSALLIS_ALPHAS:
                obs = np.mean([tsallis_entropy(p, a) for p in table])
                margins.setdefault(("tsallis", a), []).append(
                    obs - tsallis_uncertainty_bound(a, m.M, d, m.kappa, pur))
        for (fam, a), vals in margins.items():
            label = "inf" if math.isinf(a) else f"{a:g}"
            print(f"{d:>3} {fam:>8} {label:>6} {min(vals):>12.3e} {np.mean(vals):>12.3e}")


if __name__ == "__main__":
    main()
