"""Circle-method predictions against brute-force counts over a range of k.

    python scripts/estimate_sweep.py --b 10 --kmax 7 --missing-digit 7
    python scripts/estimate_sweep.py --b 10 --kmax 6 --residue 7 3 --unweighted
"""
import argparse
import json

from digitprimes import DigitConstraint
from digitprimes.circle import EstimateConfig, estimate_count
from digitprimes.primes import load_or_sieve


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--b", type=int, default=10)
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--kmax", type=int, default=6)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--missing-digit", type=int, default=7)
    g.add_argument("--residue", type=int, nargs=2, metavar=("M", "A"))
    p.add_argument("--unweighted", action="store_true")
    p.add_argument("--json", help="write rows here")
    args = p.parse_args()

    if args.residue:
        c = DigitConstraint.digit_sum_residue(*args.residue)
    else:
        c = DigitConstraint.missing_digit(args.missing_digit)
    table = load_or_sieve(args.b**args.kmax)
    cfg = EstimateConfig(weighted=not args.unweighted, with_arcs=False)
    rows = []
    print(f"{'k':>3} {'oracle':>16} {'prediction':>16} {'ratio':>9} {'|err|/budget':>13}")
    for k in range(args.kmin, args.kmax + 1):
        e = estimate_count(c, args.b, k, cfg, table)
        share = abs(e.oracle - e.prediction) / e.error_budget if e.error_budget else float("nan")
        print(f"{k:>3} {e.oracle:>16.6f} {e.prediction:>16.6f} {e.ratio:>9.5f} {share:>13.3e}")
        rows.append(e.to_report())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2, default=str)


if __name__ == "__main__":
    main()
