"""Admissible t interval and reachable efficiency range per dimension.

Prints, for each d, the interval [t_lo, t_hi], the efficiency at each end,
and whether kappa = 1 (projective MUBs) is reachable by the construction.

    python3 scripts/kappa_range.py --dmax 10
"""

import argparse
import json

from mumkit.mum import admissible_t_interval, build_mum_set, efficiency_from_t, validate_mum_set


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dmin", type=int, default=2)
    ap.add_argument("--dmax", type=int, default=8)
    ap.add_argument("--json", action="store_true", help="emit one JSON object per line")
    args = ap.parse_args()

    if not args.json:
        print(f"{'d':>3} {'t_lo':>12} {'t_hi':>12} {'kappa(t_lo)':>12} {'kappa(t_hi)':>12}  kappa=1?")
    for d in range(args.dmin, args.dmax + 1):
        lo, hi = admissible_t_interval(d)
        k_lo, k_hi = efficiency_from_t(d, lo), efficiency_from_t(d, hi)
        worst = max(validate_mum_set(build_mum_set(d, hi)).values())
        row = {"d": d, "t_lo": lo, "t_hi": hi, "kappa_lo": k_lo, "kappa_hi": k_hi,
               "kappa_max": max(k_lo, k_hi), "reaches_mub": abs(max(k_lo, k_hi) - 1) < 1e-12,
               "max_residual": worst}
        if args.json:
            print(json.dumps(row))
        else:
            print(f"{d:>3} {lo:>12.8f} {hi:>12.8f} {k_lo:>12.8f} {k_hi:>12.8f}  "
                  f"{'yes' if row['reaches_mub'] else 'no'}")


if __name__ == "__main__":
    main()
