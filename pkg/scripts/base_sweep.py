"""Empirical L1 constants, exponents and large-sieve ratios as the base grows.

    python scripts/base_sweep.py --bases 3 5 10 20 50 --k 3
"""
import argparse

from digitprimes.bounds import ExponentSet, fit_l1_constants, verify_large_sieve


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--bases", type=int, nargs="+", default=[3, 5, 10, 20])
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--D", type=int, default=2)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    print(f"{'b':>4} {'C_max':>8} {'spread':>7} {'alpha_b':>8} {'beta_b':>8} {'sieve ratio':>12} {'overshoot':>9}")
    for b in args.bases:
        fit = fit_l1_constants(b, ks=tuple(range(2, args.k + 1)) or (1,), samples=args.samples, seed=args.seed)
        e = ExponentSet.from_constant(b, fit["C_max"])
        ls = verify_large_sieve(b, args.k, args.D, C=fit["C_max"])
        print(
            f"{b:>4} {fit['C_max']:>8.4f} {fit['spread']:>7.3f} {e.alpha_b:>8.4f} {e.beta_b:>8.4f}"
            f" {ls.fitted_constant:>12.4e} {ls.extras['overshoot']:>9.3f}"
        )


if __name__ == "__main__":
    main()
