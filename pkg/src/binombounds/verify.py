"""Verification sweeps of the bounds against the exact oracle.

Comparisons are exact: a float bound is compared with the rational CDF by
cross-multiplying integers.  A bound above 1/2 is compared through its
complement ``1 - C(k)`` against the exact upper tail, and values below the
normal float range through their logs, so neither rounding to 1.0 nor
underflow to 0.0 can make a check pass or fail spuriously.
"""

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal

from .bounds import (
    BinomialParams,
    bracket_quantile,
    c_bound,
    c_bound_pair,
    log_c_bound,
    log_c_bound_sf,
)
from .oracle import (
    ExactProb,
    as_rational,
    exact_cdf,
    exact_cdf_table,
    log_cdf_beta,
    log_sf_beta,
)

__all__ = [
    "Failure",
    "SweepReport",
    "check_pair",
    "check_quantile",
    "parse_grid",
    "run_sweep",
]

TINY = 1e-300
EQUALITY_RTOL = 1e-12
LOG_TOL = 1e-12
COMPLEMENT_TOL = 1e-14


@dataclass(frozen=True, order=True)
class Failure:
    n: int
    p: float
    k: int
    detail: str


@dataclass
class SweepReport:
    cases_total: int = 0
    worst_gap: float = 0.0
    worst_slack: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def cases_failed(self):
        return len(self.failures)

    @property
    def ok(self):
        return not self.failures

    def merge(self, other):
        self.cases_total += other.cases_total
        self.worst_gap = max(self.worst_gap, other.worst_gap)
        self.worst_slack = max(self.worst_slack, other.worst_slack)
        self.failures.extend(other.failures)

    def to_dict(self):
        return {
            "cases_total": self.cases_total,
            "cases_failed": self.cases_failed,
            "worst_gap": self.worst_gap,
            "worst_slack": self.worst_slack,
            "failures": [
                {"n": f.n, "p": f.p, "k": f.k, "detail": f.detail}
                for f in sorted(self.failures)
            ],
        }


class _Bound:
    """A bound value in the three representations the comparisons need."""

    __slots__ = ("value", "sf", "log", "log_sf")

    def __init__(self, params, k):
        self.value, self.sf = c_bound_pair(params, k)
        self.log = None
        self.log_sf = None
        if self.value < TINY:
            self.log = log_c_bound(params, k)
        if self.value > 0.5 and self.sf < TINY:
            self.log_sf = log_c_bound_sf(params, k)


def _sign(x):
    return (x > 0) - (x < 0)


def _cmp_float(x, num, den):
    # sign of x - num/den, exact
    a, b = x.as_integer_ratio()
    return _sign(a * den - num * b)


def _float_sign(x, num, den, rounded):
    # ``rounded`` is num/den correctly rounded, so any other float is on a
    # definite side of num/den; only a tie needs the integers
    if x != rounded:
        return 1 if x > rounded else -1
    return _cmp_float(x, num, den)


def _compare(bound, num, den, head, tail):
    # head = num/den, tail = (den-num)/den, both correctly rounded
    if bound.value <= 0.5:
        if bound.value >= TINY:
            rel = abs(bound.value - head) / head if head > 0 else float("inf")
            return _float_sign(bound.value, num, den, head), rel
        diff = bound.log - ExactProb(num, den).log()
        return (_sign(diff) if abs(diff) > LOG_TOL else 0), abs(diff)
    rest = den - num
    if bound.sf >= TINY:
        rel = abs(bound.sf - tail) / tail if tail > 0 else float("inf")
        return -_float_sign(bound.sf, rest, den, tail), rel
    if rest == 0:
        return -1, float("inf")
    diff = bound.log_sf - ExactProb(rest, den).log()
    return (-_sign(diff) if abs(diff) > LOG_TOL else 0), abs(diff)


def compare(bound, num, den):
    """Sign of ``C - num/den`` and the relative size of the difference.

    Returns ``(sign, rel)``.  ``rel`` is the relative difference measured on
    the smaller tail; the sign is exact unless both sides sit below the float
    range, where it comes from logs and ``sign == 0`` means "within LOG_TOL".
    """
    return _compare(bound, num, den, num / den, (den - num) / den)


def _before(a, b):
    """``a`` strictly below ``b``, judged on the tail that keeps precision."""
    if a.value <= 0.5 < b.value:
        return True
    if b.value <= 0.5 < a.value:
        return False
    if a.value <= 0.5:
        if a.value >= TINY or b.value >= TINY:
            return a.value < b.value
        return a.log < b.log
    if a.sf >= TINY or b.sf >= TINY:
        return a.sf > b.sf
    return a.log_sf > b.log_sf


def _quantile_cases(params, rng, count, bounds):
    qs = []
    for i in range(count):
        if i % 2 == 0:
            q = rng.random()
        else:
            # land right on (or next to) a bound value to stress the edges
            q = bounds[rng.randrange(params.n + 1)].value
            q = rng.choice((q, math.nextafter(q, 0.0), math.nextafter(q, 1.0)))
        if 0.0 < q < 1.0:
            qs.append(q)
    return qs


def _oracle_quantile(cumulative, den, q):
    a, b = q.as_integer_ratio()
    lo, hi = 0, len(cumulative) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cumulative[mid] * b >= a * den:
            hi = mid
        else:
            lo = mid + 1
    return lo


SCREEN_MARGIN = 1e-9


def _cdf_minus(n, p, k, q):
    # sign of P{X <= k} - q; the incomplete-beta value settles it unless the
    # two are within SCREEN_MARGIN, in which case the exact sum decides
    if k >= n:
        return 1
    if q <= 0.5:
        diff = log_cdf_beta(n, p, k) - math.log(q)
    else:
        diff = math.log1p(-q) - log_sf_beta(n, p, k)
    if abs(diff) > SCREEN_MARGIN:
        return 1 if diff > 0 else -1
    a, b = as_rational(p)
    return -exact_cdf(n, a, b, k, limit=None).compare_float(q)


def check_quantile(n, p, q, bracket):
    """Whether ``min{k : P{X <= k} >= q}`` lies in ``bracket``.

    Meant for sizes where a full exact table per case is too slow: each of
    the (at most two) comparisons with ``q`` is made on the incomplete-beta
    value and falls back to exact arithmetic when it is too close to call.
    """
    lo, hi = bracket.k_low, bracket.k_high
    if hi - lo not in (0, 1) or not (0 <= lo <= n):
        return False
    if _cdf_minus(n, p, hi, q) < 0:
        return False
    return lo == 0 or _cdf_minus(n, p, lo - 1, q) < 0


def check_pair(n, p, seed=0, quantiles=2, refine=0, complement=True):
    """Run every check for one ``(n, p)``; returns a :class:`SweepReport`.

    Checks, for ``0 <= k <= n-1``: the two-sided bound (equal at the two
    attained ends, strict for ``1 <= k <= n-2``), the gap bound
    ``F(k) - C(k) < P{X = k}``, strict growth of ``C``, the complement
    identity at every ``k`` in ``[0, n]`` (unless ``complement`` is false),
    ``quantiles`` random quantile brackets and ``refine`` random refined
    upper bounds.
    """
    params = BinomialParams(n, p)
    mirrored = BinomialParams(n, 1.0 - p)
    a, b = as_rational(p)
    cumulative, den = exact_cdf_table(n, a, b)
    bounds = [_Bound(params, k) for k in range(n + 1)]
    report = SweepReport()
    problems = {}

    def fail(k, text):
        problems.setdefault(k, []).append(text)

    previous_upper = None
    for k in range(n):
        report.cases_total += 1
        exact = cumulative[k]
        low, high = bounds[k], bounds[k + 1]
        # each side only needs the tail it is compared on
        cdf = exact / den if min(low.value, high.value) <= 0.5 else None
        tail = (den - exact) / den if max(low.value, high.value) > 0.5 else None
        lower_sign, lower_rel = _compare(low, exact, den, cdf, tail)
        upper_sign, upper_rel = _compare(high, exact, den, cdf, tail)
        strict = 1 <= k <= n - 2

        if k == 0:
            if lower_rel > EQUALITY_RTOL:
                fail(k, f"lower bound not attained at k=0 (rel diff {lower_rel:.3g})")
        elif lower_sign > 0 or (strict and lower_sign == 0):
            fail(k, "lower bound violated" if lower_sign > 0 else "lower bound not strict")

        if k == n - 1:
            if upper_rel > EQUALITY_RTOL:
                fail(k, f"upper bound not attained at k=n-1 (rel diff {upper_rel:.3g})")
        elif upper_sign < 0 or (strict and upper_sign == 0):
            fail(k, "upper bound violated" if upper_sign < 0 else "upper bound not strict")

        # F(k) - C(k) < P{X=k}  <=>  C(k) > F(k-1), the upper comparison at k-1
        if k == 0:
            gap_ok = bounds[0].value > 0.0 or bounds[0].log is not None
        else:
            gap_ok = previous_upper > 0
        if not gap_ok:
            fail(k, "gap not below the point probability")
        previous_upper = upper_sign

        # for n = 1 the sequence is C(0) = C(1) = 1 - p
        if n >= 2 and not _before(low, high):
            fail(k, "bound sequence not strictly increasing")

        gap = cdf - low.value if cdf is not None else low.sf - tail
        slack = high.value - cdf if tail is None else tail - high.sf
        report.worst_gap = max(report.worst_gap, gap)
        report.worst_slack = max(report.worst_slack, slack)

    for k in range(n + 1 if complement else 0):
        total = bounds[k].value + c_bound(mirrored, n - k)
        if abs(total - 1.0) > COMPLEMENT_TOL:
            fail(min(k, n - 1), f"complement identity off by {total - 1.0:.3g} at k={k}")

    rng = random.Random(f"{seed}:{n}:{p!r}")
    for q in _quantile_cases(params, rng, quantiles, bounds):
        report.cases_total += 1
        bracket = bracket_quantile(params, q)
        truth = _oracle_quantile(cumulative, den, q)
        if truth not in (bracket.k_low, bracket.k_high) or bracket.k_high - bracket.k_low not in (0, 1):
            fail(min(bracket.k_low, n - 1),
                 f"quantile {truth} outside bracket [{bracket.k_low}, {bracket.k_high}] for q={q!r}")

    if refine and n >= 2:
        from .refine import refined_upper

        for _ in range(refine):
            k = rng.randrange(n - 1)
            report.cases_total += 1
            value = refined_upper(params, k)
            if _cmp_float(value, cumulative[k], den) < 0:
                fail(k, f"refined upper {value!r} below the CDF")
            elif value > bounds[k + 1].value:
                fail(k, f"refined upper {value!r} above C(k+1)")

    report.failures = [Failure(n, p, k, "; ".join(msgs)) for k, msgs in sorted(problems.items())]
    return report


def parse_grid(spec):
    """``"start:stop:step"`` to a list of floats, both ends included.

    Decimal arithmetic keeps ``0.07`` from turning into ``0.06999999999999999``;
    the stop value counts as included if it is within half a step.
    """
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like start:stop:step, got {spec!r}")
    start, stop, step = (Decimal(x) for x in parts)
    if step <= 0 or stop < start:
        raise ValueError(f"empty or descending grid {spec!r}")
    count = int((stop - start) / step + Decimal("0.5")) + 1
    return [float(start + i * step) for i in range(count)]


def _run_one(args):
    return check_pair(*args)


def run_sweep(n_values, p_values, seed=0, quantiles=2, refine=0, jobs=1, complement=True):
    """Run :func:`check_pair` over a grid and aggregate the reports."""
    tasks = [(n, p, seed, quantiles, refine, complement) for n in n_values for p in p_values]
    report = SweepReport()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_run_one, tasks, chunksize=8):
                report.merge(part)
    else:
        for task in tasks:
            report.merge(_run_one(task))
    report.failures.sort()
    return report
