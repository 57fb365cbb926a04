"""Implied constants of the equidistribution and prime-sum bounds at two grid densities.

    python scripts/vinogradov_fits.py --csv fits
"""
import argparse

from digitprimes.expsums import GRID_SIZES, fit_vinogradov_constants, vinogradov_grid
from digitprimes.primes import load_or_sieve


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--densities", type=int, nargs="+", default=[1, 2])
    p.add_argument("--csv", help="prefix for per-sample CSV dumps")
    args = p.parse_args()

    table = load_or_sieve(max(GRID_SIZES) + 1)
    for which, name in ((1, "equidistribution"), (2, "prime sum")):
        for density in args.densities:
            grid = vinogradov_grid(which, density)
            fit = fit_vinogradov_constants(grid, table if which == 2 else None)
            print(f"{name:>16} density={density} points={len(grid):>4} C={fit.fitted_constant:.4e} median={fit.median_ratio:.4e}")
            if args.csv:
                fit.to_csv(f"{args.csv}_{which}_{density}.csv")


if __name__ == "__main__":
    main()
