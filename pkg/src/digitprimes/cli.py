"""``digitprimes`` command line: counts, estimates, spectra, arcs and bound checks.

Exit status: 0 success, 1 usage/resource error, 2 a checked inequality failed.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import bounds, circle, expsums, fourier, reports
from .constraints import DigitConstraint
from .errors import DigitPrimesError, UnsupportedEstimatorError
from .primes import count_constrained_primes, load_or_sieve
from .rational import Frequency

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

VERIFY_TARGETS = ("l1", "large-sieve", "hybrid", "linf1", "linf2", "single-digit", "equidistribution", "prime-sum")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def rational(text: str) -> Fraction:
    """Exact ``p/q`` (or integer / terminating decimal) parsing."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 3/7, got {text!r}") from None


def prescribed_list(text: str) -> dict[int, int]:
    """``"0:1,3:7"`` -> ``{0: 1, 3: 7}`` (position:digit, position 0 = units)."""
    out = {}
    for item in filter(None, text.split(",")):
        try:
            i, e = item.split(":")
            out[int(i)] = int(e)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected position:digit pairs like 0:1,3:7, got {item!r}") from None
    return out


def _common(p: argparse.ArgumentParser, constraint: bool = True) -> None:
    p.add_argument("--b", type=int, default=10, help="base (default 10)")
    p.add_argument("--k", type=int, default=4, help="number of digits (default 4)")
    if constraint:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--missing-digit", type=int, metavar="A0")
        g.add_argument("--residue", type=int, nargs=2, metavar=("M", "A"), help="digit sum = A (mod M)")
        g.add_argument("--character", type=rational, metavar="J/M", help="character e(alpha s_b(n))")
        g.add_argument("--prescribed", type=prescribed_list, metavar="I:E,...")
    p.add_argument("--output", "-o", help="report path")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dry-run", action="store_true", help="validate and print the plan only")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="digitprimes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="brute-force count of constrained primes below b^k")
    _common(p)
    p.add_argument("--weighted", action="store_true", help="sum Lambda(n) instead of counting primes")

    p = sub.add_parser("estimate", help="circle-method prediction vs oracle")
    _common(p)
    w = p.add_mutually_exclusive_group()
    w.add_argument("--weighted", dest="weighted", action="store_true", default=True)
    w.add_argument("--unweighted", dest="weighted", action="store_false")
    p.add_argument("--A", type=float, default=8.0)
    p.add_argument("--threshold", type=float)
    p.add_argument("--d0", type=int)
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--no-arcs", action="store_true")

    p = sub.add_parser("fourier", help="transform value at one frequency")
    _common(p)
    p.add_argument("--theta", type=rational, default=Fraction(0), help="exact rational frequency")
    p.add_argument("--offset", type=float, default=0.0, help="real perturbation added to theta")
    p.add_argument("--oracle", action="store_true", help="also sum directly")

    p = sub.add_parser("spectrum", help="transform at every a/b^k")
    _common(p)
    p.add_argument("--shift", type=rational, default=Fraction(0))

    p = sub.add_parser("verify", help="numerical bound checks")
    p.add_argument("target", choices=VERIFY_TARGETS)
    _common(p)
    p.add_argument("--samples", type=int, default=16, help="theta samples (l1)")
    p.add_argument("--C", type=float, help="frozen constant; the check fails if lhs > rhs")
    p.add_argument("--D", type=int, default=2)
    p.add_argument("--B", type=float, default=10.0)
    p.add_argument("--theta", type=rational, default=Fraction(0))
    p.add_argument("--alpha", type=rational)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=10_000)
    p.add_argument("--shift", type=rational, default=Fraction(0), help="grid shift (linf2)")
    p.add_argument("--density", type=int, default=1)

    p = sub.add_parser("arcs", help="major/minor arc classification")
    _common(p, constraint=False)
    p.add_argument("--A", type=float, default=2.0)
    p.add_argument("--threshold", type=float)
    p.add_argument("--d0", type=int)

    p = sub.add_parser("report-all", help="run a small battery of checks")
    _common(p, constraint=False)
    return parser


def constraint_from(args) -> DigitConstraint:
    if getattr(args, "missing_digit", None) is not None:
        c = DigitConstraint.missing_digit(args.missing_digit)
    elif getattr(args, "residue", None) is not None:
        c = DigitConstraint.digit_sum_residue(*args.residue)
    elif getattr(args, "character", None) is not None:
        c = DigitConstraint.character(args.character)
    elif getattr(args, "prescribed", None) is not None:
        c = DigitConstraint.prescribed(args.prescribed)
    else:
        raise UsageError("a constraint is required: --missing-digit, --residue, --character or --prescribed")
    return c.validate(args.b, args.k)


def _config(args) -> dict:
    skip = {"output", "dry_run", "func", "workers"}
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def _table(args, limit: int):
    return load_or_sieve(limit, workers=args.workers)


# -- commands -------------------------------------------------------------------
# each returns (ok, result dict, csv rows or None) or a plan when dry

def cmd_count(args, dry):
    c = constraint_from(args)
    N = args.b**args.k
    if dry:
        return [f"sieve primes below {N}", f"count {c.describe()} ({'weighted' if args.weighted else 'primes'})"]
    value = count_constrained_primes(c, args.b, args.k, weighted=args.weighted, table=_table(args, N))
    return True, {"constraint": c.describe(), "b": args.b, "k": args.k, "weighted": args.weighted, "count": value}, None


def cmd_estimate(args, dry):
    c = constraint_from(args)
    cfg = circle.EstimateConfig(
        weighted=args.weighted,
        A=args.A,
        threshold=args.threshold,
        d0=args.d0,
        with_oracle=not args.no_oracle,
        with_arcs=not args.no_arcs,
    )
    if c.kind.value == "prescribed_digits" or c.is_character:
        raise UnsupportedEstimatorError("estimate supports --missing-digit and --residue only")
    N = args.b**args.k
    if dry:
        plan = ["main term and error budget"]
        if cfg.with_oracle:
            plan.insert(0, f"sieve primes below {N}")
            plan.append("oracle count")
        if cfg.with_arcs and N <= circle.ARC_LIMIT:
            plan.append("arc classification")
        return plan
    table = _table(args, N) if cfg.with_oracle else None
    est = circle.estimate_count(c, args.b, args.k, cfg, table)
    rep = est.to_report()
    return True, rep, [rep]


def cmd_fourier(args, dry):
    c = constraint_from(args)
    theta = Frequency(args.theta.numerator, args.theta.denominator, args.offset)
    if dry:
        return [f"product formula at theta={theta}"] + (["direct summation"] if args.oracle else [])
    value = fourier.fourier_eval(c, theta, args.b, args.k)
    res = {"constraint": c.describe(), "b": args.b, "k": args.k, "theta": str(theta), "value": value, "modulus": abs(value)}
    if args.oracle:
        o = fourier.naive_fourier_oracle(c, theta, args.b, args.k)
        res["oracle"] = o
        res["rel_err"] = abs(value - o) / max(abs(o), 1.0)
    return True, res, [res]


def cmd_spectrum(args, dry):
    c = constraint_from(args)
    N = args.b**args.k
    if N > fourier.SPECTRUM_LIMIT:
        raise UsageError(f"--b/--k: b^k = {N} exceeds spectrum size {fourier.SPECTRUM_LIMIT}")
    if dry:
        return [f"digit-factorised spectrum of length {N}"]
    spec = fourier.full_spectrum(c, args.b, args.k, shift=args.shift)
    mod = np.abs(spec)
    res = {
        "constraint": c.describe(),
        "b": args.b,
        "k": args.k,
        "shift": str(args.shift),
        "l1": float(mod.sum()),
        "max_modulus": float(mod.max()),
        "argmax": int(mod.argmax()),
        "value_at_0": spec[0],
    }
    rows = ({"a": a, "re": float(v.real), "im": float(v.imag), "modulus": float(abs(v))} for a, v in enumerate(spec))
    return True, res, rows


def _fit_result(fit: expsums.BoundFit, C=None):
    rows = [{**r["params"], "lhs": r["lhs"], "rhs": r["rhs"], "ratio": r["ratio"]} for r in fit.sample]
    finite = all(math.isfinite(r["ratio"]) for r in fit.sample if r.get("in_hypothesis", True))
    ok = finite and (C is None or fit.fitted_constant <= 1.0)
    return ok, {**fit.summary(), "lhs_max": max(r["lhs"] for r in fit.sample), "rows": rows}, rows


def cmd_verify(args, dry):
    t, b, k = args.target, args.b, args.k
    if dry:
        return [f"verify {t} at b={b}, k={k}"]
    if t == "l1":
        c = constraint_from(args) if _has_constraint(args) else None
        fit = bounds.verify_l1(b, k, bounds.l1_theta_samples(b, k, args.samples, args.seed), c)
        if args.C is not None:
            for r in fit.sample:
                r["rhs"] = (args.C * b * math.log(b)) ** k
            fit = expsums.BoundFit.from_rows(fit.sample, **fit.extras)
        return _fit_result(fit, args.C)
    if t == "large-sieve":
        c = constraint_from(args) if _has_constraint(args) else None
        fit = bounds.verify_large_sieve(b, k, args.D, theta=args.theta, C=args.C, constraint=c)
        return _fit_result(fit, args.C)
    if t == "hybrid":
        c = constraint_from(args) if _has_constraint(args) else None
        fit = bounds.verify_hybrid(b, k, args.D, args.B, C=args.C, constraint=c, alpha=args.alpha)
        return _fit_result(fit, args.C)
    if t in ("linf1", "linf2"):
        if t == "linf1":
            a0 = args.missing_digit if args.missing_digit is not None else min(7, b - 1)
            rep = bounds.verify_linf(b, k, "rational", d=args.d, ell=args.ell, eps=args.eps, a0=a0)
        else:
            if args.alpha is None:
                raise UsageError("verify linf2 needs --alpha j/m")
            rep = bounds.verify_linf(b, k, "character", alpha=args.alpha, grid=args.grid, shift=args.shift)
        return rep.ok, rep.as_dict(), rep.violations
    if t == "single-digit":
        rep = bounds.single_digit_inequalities(b, args.grid)
        return rep.ok, rep.as_dict(), rep.violations
    which = 1 if t == "equidistribution" else 2
    grid = expsums.vinogradov_grid(which, args.density)
    table = _table(args, max(p["x"] for p in grid) + 1) if which == 2 else None
    return _fit_result(expsums.fit_vinogradov_constants(grid, table))


def _has_constraint(args) -> bool:
    return any(getattr(args, f, None) is not None for f in ("missing_digit", "residue", "character", "prescribed"))


def cmd_arcs(args, dry):
    b, k = args.b, args.k
    N = b**k
    threshold = args.threshold or (k * math.log(b)) ** args.A
    d0 = args.d0 or circle.default_d0(b, k)
    if N > circle.ARC_LIMIT:
        raise UsageError(f"--b/--k: b^k = {N} exceeds arc classification size {circle.ARC_LIMIT}")
    if dry:
        return [f"classify {N} frequencies with d0={d0}, threshold={threshold:.6g}"]
    dec = circle.classify_arcs(b, k, threshold, d0)
    res = {"b": b, "k": k, "d0": d0, "threshold": threshold, "major_count": dec.major_count, "minor_count": dec.minor_count}
    rows = (
        {"a": a, "ell": int(dec.ell[a]), "d": int(dec.d[a]), "beta": float(dec.beta[a]), "label": dec.label(a)} for a in range(N)
    )
    return True, res, rows


def cmd_report_all(args, dry):
    b, k = args.b, args.k
    N = b**k
    a0 = min(7, b - 1)
    steps = [
        "count and weighted count of missing-digit primes",
        "missing-digit estimate vs oracle",
        "Fourier inversion identity",
        "L1 constants over k = 2..min(k, 4)",
        "character L-infinity bound on a 1000-point grid",
        "single-digit inequalities on a 10^4 grid",
        "arc classification",
    ]
    if dry:
        return steps
    if N > fourier.ORACLE_LIMIT:
        raise UsageError(f"--b/--k: report-all needs b^k <= {fourier.ORACLE_LIMIT}")
    table = _table(args, N)
    c = DigitConstraint.missing_digit(a0).validate(b, k)
    out, ok = {}, True
    out["count"] = count_constrained_primes(c, b, k, table=table)
    out["estimate"] = circle.estimate_count(c, b, k, circle.EstimateConfig(with_arcs=False), table).to_report()
    lhs, rhs, rel = circle.inversion_identity_check(c, b, k, table)
    out["inversion"] = {"lhs": lhs, "rhs": rhs, "rel_err": rel, "ok": rel <= 1e-6}
    ok &= rel <= 1e-6
    out["l1"] = bounds.fit_l1_constants(b, ks=tuple(range(2, min(k, 4) + 1)) or (1,), seed=args.seed)
    alpha = Fraction(1, next(m for m in range(2, b + 1) if math.gcd(m, b - 1) == 1))
    linf = bounds.verify_linf(b, k, "character", alpha=alpha, grid=1000)
    out["linf2"] = linf.as_dict()
    ok &= linf.ok
    sd = bounds.single_digit_inequalities(b, 10_000)
    out["single_digit"] = sd.as_dict()
    ok &= sd.ok
    dec = circle.classify_arcs(b, k, (k * math.log(b)) ** 2)
    out["arcs"] = {"major_count": dec.major_count, "minor_count": dec.minor_count}
    return ok, out, [{"check": key, "ok": val.get("ok", True) if isinstance(val, dict) else True} for key, val in out.items()]


COMMANDS = {
    "count": cmd_count,
    "estimate": cmd_estimate,
    "fourier": cmd_fourier,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "arcs": cmd_arcs,
    "report-all": cmd_report_all,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.b < 2:
        parser.error(f"--b must be >= 2 (got {args.b})")
    if args.k < 1:
        parser.error(f"--k must be >= 1 (got {args.k})")
    if args.workers < 1:
        parser.error(f"--workers must be >= 1 (got {args.workers})")
    name = args.command + (f" {args.target}" if args.command == "verify" else "")
    fn = COMMANDS[args.command]
    try:
        if args.dry_run:
            plan = fn(args, True)
            print(reports.dumps({"command": name, "config": reports.to_jsonable(_config(args)), "plan": plan}), end="", file=stdout)
            return EXIT_OK
        t0 = time.perf_counter()
        ok, result, rows = fn(args, False)
        elapsed = time.perf_counter() - t0
    except (UsageError, DigitPrimesError, ValueError) as exc:
        print(f"digitprimes {name}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = reports.envelope(name, _config(args), result, ok)
    report["timings"] = {"total": elapsed}
    if args.format == "csv" and rows is not None:
        text = reports.write_csv(rows, args.output)
    else:
        text = reports.write_json(report, args.output)
    if args.command == "count":
        print(result["count"], file=stdout)
    elif not args.output:
        print(text, end="", file=stdout)
    else:
        print(f"wrote {args.output}", file=stdout)
    if not ok:
        print(f"digitprimes {name}: check failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
