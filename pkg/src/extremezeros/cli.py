"""Command-line front end: zeros, product sequences, deformation paths,
bounds tables and verification reports, all written as CSV.

Examples::

    extremezeros zeros --family laguerre --n 2 --alpha 0
    extremezeros products --family hermite-even --n-max 20
    extremezeros path --n 20 --alpha 0.5 --f t --t-grid 101,0,1
    extremezeros verify proposition --alpha -0.5 0.5 --n-min 199 --n-max 199 \\
        --t-grid 101,0,0.8531

Exit status is 0 on success (or when every verdict holds), 1 when a
verification has a failing or unresolved case, and 2 on usage or domain
errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import harness
from .bounds import bounds_report
from .errors import DomainError
from .orthopoly import (
    FAMILIES,
    MONOTONE_ALPHAS,
    LAGUERRE,
    hermite_positive_zeros,
    laguerre_zeros,
    product_sequence,
)
from .parametric import (
    TRANSITIONS,
    extreme_path,
    laguerre_deformation,
    verify_polynomial_identities,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2

CHECKS = (
    "gazeau",
    "quoted",
    "laguerre",
    "proposition",
    "conjecture",
    "interior-max",
    "bounds",
)


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """17 significant digits for floats, so the CSV round-trips binary64."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        return "%.17g" % value
    return str(value)


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_csv(path, header, rows) -> None:
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def parse_t_grid(spec: str) -> np.ndarray:
    """``count,lo,hi`` to an equispaced grid including both ends."""
    parts = spec.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("t grid must be 'count,lo,hi'")
    try:
        count = int(parts[0])
        lo, hi = float(parts[1]), float(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad t grid {spec!r}: {exc}") from None
    if count < 1 or not lo <= hi:
        raise argparse.ArgumentTypeError(f"bad t grid {spec!r}: need count>=1, lo<=hi")
    return np.linspace(lo, hi, count)


def _transition(name):
    if name not in TRANSITIONS:
        raise argparse.ArgumentTypeError(
            f"unknown transition {name!r}; choose from {sorted(TRANSITIONS)}"
        )
    return TRANSITIONS[name]


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _single_alpha(args):
    if args.alpha is None:
        raise UsageError("--alpha is required")
    if len(args.alpha) != 1:
        raise UsageError("--alpha takes a single value here")
    return args.alpha[0]


def cmd_zeros(args):
    if args.family == LAGUERRE:
        zs = laguerre_zeros(args.n, _single_alpha(args), args.tol)
    else:
        if args.alpha is not None:
            raise UsageError("--alpha is not used for the Hermite family")
        zs = hermite_positive_zeros(args.n, args.tol)
    write_csv(args.out, ["index", "value"], enumerate(zs.tolist()))
    return EXIT_OK


def cmd_products(args):
    rows = []
    if args.family == LAGUERRE:
        alphas = MONOTONE_ALPHAS if args.alpha is None else args.alpha
        for alpha in alphas:
            seq = product_sequence(LAGUERRE, args.n_max, alpha, args.tol)
            rows.extend((e.n, float(alpha), e.y) for e in seq)
    else:
        if args.alpha is not None:
            raise UsageError("--alpha is not used for the Hermite families")
        seq = product_sequence(args.family, args.n_max, tol=args.tol)
        rows.extend((e.n, e.alpha, e.y) for e in seq)
    write_csv(args.out, ["n", "alpha", "y"], rows)
    return EXIT_OK


def cmd_path(args):
    D = laguerre_deformation(args.n, _single_alpha(args), args.f)
    samples = extreme_path(D, args.t_grid, args.tol, derivatives=not args.no_derivatives)
    header = [
        "t",
        "lambda_min",
        "lambda_max",
        "product",
        "dmin_closed",
        "dmin_fd",
        "dmax_closed",
        "dmax_fd",
    ]
    rows = [
        (
            s.t,
            s.lambda_min,
            s.lambda_max,
            s.product,
            s.dlambda_min_closed,
            s.dlambda_min_fd,
            s.dlambda_max_closed,
            s.dlambda_max_fd,
        )
        for s in samples
    ]
    write_csv(args.out, header, rows)
    return EXIT_OK


def _n_values(args, default_lo, default_hi):
    lo = default_lo if args.n_min is None else args.n_min
    hi = default_hi if args.n_max is None else args.n_max
    if lo > hi:
        raise UsageError(f"--n-min {lo} exceeds --n-max {hi}")
    return range(lo, hi + 1)


def cmd_bounds(args):
    alphas = harness.DEFAULT_ALPHAS if args.alpha is None else args.alpha
    ns = _n_values(args, 5, 20)
    if ns.start < 5:
        raise DomainError("the bounds table needs n >= 5")
    rows = []
    for alpha in alphas:
        for n in ns:
            r = bounds_report(n, alpha)
            rows.append(
                (r.n, r.alpha, r.dk_upper, r.m0_upper, r.m2_lower, r.prod1_margin, r.prod2_K)
            )
    write_csv(args.out, ["n", "alpha", "dk", "m0", "m2", "prod1_margin", "prod2_K"], rows)
    return EXIT_OK


def _run_check(args):
    name = args.check
    alphas = None if args.alpha is None else tuple(args.alpha)
    if name == "gazeau":
        return harness.check_gazeau_inequality(400 if args.n_max is None else args.n_max)
    if name == "quoted":
        return harness.check_quoted_products()
    if name == "laguerre":
        return harness.check_laguerre_product_monotonicity(
            alphas or MONOTONE_ALPHAS, 100 if args.n_max is None else args.n_max
        )
    if name == "proposition":
        return harness.check_proposition(
            alphas or harness.PROPOSITION_ALPHAS,
            _n_values(args, 5, 60),
            args.t_grid,
        )
    if name == "conjecture":
        return harness.check_conjecture(
            alphas or harness.CONJECTURE_ALPHAS,
            _n_values(args, 5, 60),
            args.t_grid,
            args.f,
        )
    if name == "interior-max":
        return harness.check_interior_maximum(
            20 if args.n_max is None else args.n_max,
            0.5 if alphas is None else _single_alpha(args),
        )
    return harness.check_bounds(_n_values(args, 5, 200), alphas or harness.DEFAULT_ALPHAS)


def cmd_verify(args):
    report = _run_check(args)
    keys: list[str] = []
    for c in report.cases:
        for k in c.params:
            if k not in keys:
                keys.append(k)
    header = ["kind", *keys, "verdict", "margin", "threshold"]
    rows = [
        (c.kind, *(c.params.get(k, "") for k in keys), c.verdict, c.margin, c.threshold)
        for c in report.cases
    ]
    write_csv(args.out, header, rows)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.all_hold else EXIT_VERDICT


def cmd_identities(args):
    alpha = _single_alpha(args)
    D = laguerre_deformation(args.n, alpha, args.f)
    ts = [t for t in args.t_grid if D.f.lo < t < D.f.hi]
    if not ts:
        raise DomainError("identities need grid points strictly inside (0, 1)")
    reports = [verify_polynomial_identities(D, t, args.tol) for t in ts]
    keys = list(reports[0].residuals)
    rows = [
        (r.n, r.alpha, r.t, *(r.residuals[k] for k in keys), r.max_residual)
        for r in reports
    ]
    write_csv(args.out, ["n", "alpha", "t", *keys, "max_residual"], rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="extremezeros",
        description="Extreme zeros of Laguerre and Hermite polynomials and "
        "their deformations, as CSV.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, alpha_help="alpha parameter(s), each > -1"):
        sp.add_argument("--alpha", type=float, nargs="+", help=alpha_help)
        sp.add_argument("--tol", type=float, help="absolute bisection tolerance")
        sp.add_argument("--out", help="output CSV path (default: stdout)")

    sp = sub.add_parser("zeros", help="zeros of L_n^(alpha) or positive zeros of H_n")
    sp.add_argument("--family", choices=(LAGUERRE, "hermite"), default=LAGUERRE)
    sp.add_argument("--n", type=_positive_int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_zeros)

    sp = sub.add_parser("products", help="products of extreme zeros by degree")
    sp.add_argument("--family", choices=FAMILIES, default=LAGUERRE)
    sp.add_argument("--n-max", type=_positive_int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_products)

    sp = sub.add_parser("path", help="extremes and derivatives along a deformation")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--f", type=_transition, default=TRANSITIONS["t"])
    sp.add_argument("--t-grid", type=parse_t_grid, default=parse_t_grid("101,0,1"))
    sp.add_argument("--no-derivatives", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_path)

    sp = sub.add_parser("bounds", help="table of the explicit zero bounds")
    sp.add_argument("--n-min", type=int)
    sp.add_argument("--n-max", type=int)
    common(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("verify", help="run a verification and report verdicts")
    sp.add_argument("check", choices=CHECKS)
    sp.add_argument("--n-min", type=int)
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--f", type=_transition, default=TRANSITIONS["t"])
    sp.add_argument("--t-grid", type=parse_t_grid)
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("identities", help="residuals of the polynomial identities")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--f", type=_transition, default=TRANSITIONS["t"])
    sp.add_argument("--t-grid", type=parse_t_grid, default=parse_t_grid("9,0.1,0.9"))
    common(sp)
    sp.set_defaults(func=cmd_identities)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is not None and not (math.isfinite(args.tol) and args.tol > 0):
        parser.error("--tol must be a positive finite number")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, ValueError) as exc:
        print(f"{parser.prog}: domain error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
