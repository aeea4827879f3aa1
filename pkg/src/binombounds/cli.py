"""Command line front end: ``bounds``, ``quantile``, ``verify`` and ``table``.

Data goes to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 when a verification sweep finds a violation and 2 for bad arguments.
Floats are written with 17 significant digits in every format, so JSON and
CSV output parses back to the identical doubles.
"""

import argparse
import json
import math
import sys
from fractions import Fraction

from .bounds import BinomialParams, bracket_quantile, c_bound, cdf_bounds, log_c_bound
from .exceptions import CapacityError, DomainError
from .oracle import (
    EXACT_LIMIT,
    ExactProb,
    cdf_beta,
    exact_cdf_table,
    log_cdf_beta,
    log_pmf,
)
from .refine import refined_upper
from .verify import parse_grid, run_sweep

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def format_number(x):
    """17 significant digits; integers stay integers, non-finite floats become null."""
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        return "null"
    text = "%.17g" % x
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _json(value):
    if isinstance(value, dict):
        items = (f"{json.dumps(k)}: {_json(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in value) + "]"
    if isinstance(value, str):
        return json.dumps(value)
    return format_number(value)


def _csv_cell(value):
    if isinstance(value, str):
        if any(c in value for c in ',"\n'):
            return '"' + value.replace('"', '""') + '"'
        return value
    text = format_number(value)
    return "" if text == "null" else text


def _text_cell(value):
    return value if isinstance(value, str) else format_number(value)


def render(rows, fmt, single=False):
    """Rows (a list of dicts sharing their keys) in the requested format."""
    if fmt == "json":
        return _json(rows[0] if single else rows) + "\n"
    if fmt == "csv":
        header = list(rows[0]) if rows else []
        lines = [",".join(header)]
        lines += [",".join(_csv_cell(row[h]) for h in header) for row in rows]
        return "\n".join(lines) + "\n"
    if single:
        row = rows[0]
        width = max(len(k) for k in row)
        return "".join(f"{k.ljust(width)}  {_text_cell(v)}\n" for k, v in row.items())
    if not rows:
        return ""
    header = list(rows[0])
    cells = [header] + [[_text_cell(row[h]) for h in header] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join(
        "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells
    )


def _probability(text):
    """``(float, Fraction)`` from a decimal or ``a/b`` string in (0, 1)."""
    try:
        frac = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"not a probability: {text!r}") from None
    if not (0 < frac < 1):
        raise _UsageError(f"probability must lie strictly between 0 and 1, got {text}")
    return float(frac), frac


def _params(args):
    p, frac = _probability(args.p)
    if args.n < 1:
        raise _UsageError(f"n must be >= 1, got {args.n}")
    return BinomialParams(args.n, p), frac


def _oracle_rows(n, frac, ks):
    """Oracle CDF, its log and pmf at each k; exact up to the oracle limit."""
    out = {}
    if n <= EXACT_LIMIT:
        cumulative, den = exact_cdf_table(n, frac.numerator, frac.denominator)
        for k in ks:
            cdf = ExactProb(cumulative[k], den)
            below = cumulative[k - 1] if k > 0 else 0
            out[k] = (cdf, Fraction(cumulative[k] - below, den))
        return out, True
    p = float(frac)
    for k in ks:
        out[k] = (cdf_beta(n, p, k), math.exp(log_pmf(n, p, k)))
    return out, False


def cmd_bounds(args):
    params, _ = _params(args)
    top = params.n - 1
    if not (0 <= args.k <= top):
        raise _UsageError(f"k must lie in [0, {top}], got {args.k}")
    pair = cdf_bounds(params, args.k)
    row = {"n": pair.n, "p": pair.p, "k": pair.k, "lower": pair.lower, "upper": pair.upper}
    if args.log:
        row["log_lower"] = pair.log_lower
        row["log_upper"] = pair.log_upper
    if args.refine:
        # C(n) = P{X <= n-1}, so there is nothing left to sharpen at k = n-1
        row["refined_upper"] = refined_upper(params, args.k) if args.k <= top - 1 else pair.upper
    return render([row], args.format, single=True), EXIT_OK


def cmd_quantile(args):
    params, _ = _params(args)
    if not (0.0 < args.q < 1.0):
        raise _UsageError(f"q must lie strictly between 0 and 1, got {args.q!r}")
    bracket = bracket_quantile(params, args.q)
    row = {
        "n": params.n,
        "p": params.p,
        "q": bracket.q,
        "k_low": bracket.k_low,
        "k_high": bracket.k_high,
        "c_low": c_bound(params, bracket.k_low),
        "c_high": c_bound(params, bracket.k_high),
    }
    return render([row], args.format, single=True), EXIT_OK


def cmd_verify(args):
    if not (1 <= args.n_max <= EXACT_LIMIT):
        raise _UsageError(f"--n-max must lie in [1, {EXACT_LIMIT}], got {args.n_max}")
    try:
        grid = parse_grid(args.p_grid)
    except (ValueError, ArithmeticError):
        raise _UsageError(f"bad --p-grid {args.p_grid!r}") from None
    if not all(0.0 < p < 1.0 for p in grid):
        raise _UsageError("--p-grid values must lie strictly between 0 and 1")
    report = run_sweep(
        range(1, args.n_max + 1),
        grid,
        seed=args.seed,
        quantiles=args.quantiles,
        refine=args.refine,
        jobs=args.jobs,
    )
    data = report.to_dict()
    if args.format == "json":
        text = _json(data) + "\n"
    elif args.format == "csv":
        # one row per failure; the summary goes to stderr
        failures = data["failures"]
        text = render(failures, "csv") if failures else "n,p,k,detail\n"
        print(_summary(data), file=sys.stderr)
    else:
        text = _summary(data) + "\n"
        text += "".join(
            f"FAIL n={f['n']} p={format_number(f['p'])} k={f['k']}: {f['detail']}\n"
            for f in data["failures"]
        )
    return text, EXIT_OK if report.ok else EXIT_FAILED


def _summary(data):
    return (
        f"cases_total={data['cases_total']} cases_failed={data['cases_failed']} "
        f"worst_gap={format_number(data['worst_gap'])} "
        f"worst_slack={format_number(data['worst_slack'])}"
    )


def _k_range(text, n):
    if text is None:
        return range(n)
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise _UsageError(f"--k-range must look like a:b, got {text!r}") from None
    if not (0 <= lo <= hi <= n - 1):
        raise _UsageError(f"--k-range must satisfy 0 <= a <= b <= {n - 1}, got {text}")
    return range(lo, hi + 1)


def cmd_table(args):
    params, frac = _params(args)
    ks = _k_range(args.k_range, params.n)
    oracle, exact = _oracle_rows(params.n, frac, ks)
    rows = []
    for k in ks:
        pair = cdf_bounds(params, k)
        cdf, pmf = oracle[k]
        if exact:
            gap = float(cdf.as_fraction() - Fraction(pair.lower))
            cdf_value, log_cdf = float(cdf), cdf.log()
        else:
            gap = cdf - pair.lower
            cdf_value, log_cdf = cdf, log_cdf_beta(params.n, params.p, k)
        row = {
            "k": k,
            "lower": pair.lower,
            "oracle": cdf_value,
            "upper": pair.upper,
            "pmf": float(pmf),
            "gap": gap,
        }
        if args.log:
            row["log_lower"] = pair.log_lower
            row["log_oracle"] = log_cdf
            row["log_upper"] = log_c_bound(params, k + 1)
        rows.append(row)
    return render(rows, args.format), EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="binombounds",
        description="Entropy bounds, quantile brackets and exact checks for the binomial CDF.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_np=True):
        if need_np:
            p.add_argument("-n", type=int, required=True, help="number of trials")
            p.add_argument("-p", required=True, help="success probability, decimal or a/b")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    b = sub.add_parser("bounds", help="lower and upper bound for P{X <= k}")
    common(b)
    b.add_argument("-k", type=int, required=True)
    b.add_argument("--log", action="store_true", help="add natural-log fields")
    b.add_argument("--refine", action="store_true", help="add the sharper upper bound")
    b.set_defaults(func=cmd_bounds)

    q = sub.add_parser("quantile", help="two consecutive integers holding the q-quantile")
    common(q)
    q.add_argument("-q", type=float, required=True)
    q.set_defaults(func=cmd_quantile)

    v = sub.add_parser("verify", help="check every bound against the exact oracle")
    common(v, need_np=False)
    v.add_argument("--n-max", type=int, default=200)
    v.add_argument("--p-grid", default="0.01:0.99:0.01", help="start:stop:step, ends included")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--quantiles", type=int, default=2, help="random quantile checks per (n, p)")
    v.add_argument(
        "--refine", type=int, nargs="?", const=2, default=0,
        help="refined-bound checks per (n, p) (default 2 when given without a value)",
    )
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="bounds, oracle CDF, pmf and gap for a range of k")
    common(t)
    t.add_argument("--k-range", help="a:b, both ends included (default 0:n-1)")
    t.add_argument("--log", action="store_true", help="add natural-log columns")
    t.set_defaults(func=cmd_table)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, status = args.func(args)
    except (_UsageError, DomainError, CapacityError) as exc:
        parser.error(str(exc))
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
