"""Sharper upper bounds for the binomial CDF.

Fix ``n`` and ``0 <= k <= n-2`` and put ``alpha = (k+1)/n``.  The gap

    delta(p) = P{X_{n,p} <= k} - C_{n,p}(k+1)

vanishes at ``p = 0`` and ``p = 1`` and is negative in between.  Its
derivative is ``-f(p) * g(p)`` with a positive ``f`` and a decreasing ``g``
that changes sign once, at ``p0``.  Bounding ``g`` by its value at a single
point ``z`` of the integration range, and the remaining integral of ``f`` by
a binomial tail, gives

    p >= p0:  delta(p) <= -|r(z)| * C_{n,z}(k),          any z in (p, 1)
    p <  p0:  delta(p) <= -|r(z)| * (1 - C_{n,z}(k+1)),  any z in (0, p)

with ``r(z) = 1 - exp(-S) * sqrt((1-alpha)(z-alpha)**2 / (2 alpha (1-z)**2 B(z)))``
and ``S = S_n - S_{k+1} - S_{n-k-1}``.  Every admissible ``z`` yields a valid
bound, so the supremum search only affects tightness.
"""

import math
import sys
from dataclasses import dataclass, field

from .bounds import BinomialParams, c_bound, c_bound_sf
from .entropy import entropy_curvature
from .exceptions import DomainError, RootBracketError
from .quadrature import integrate
from .special import INV_SQRT_2PI, std_normal_cdf, stirling_correction

__all__ = [
    "RefineContext",
    "DeltaBound",
    "g_function",
    "find_p0",
    "delta_refined_bound",
    "delta_numeric",
    "refined_upper",
]

BELOW_P0 = "below_p0"
AT_OR_ABOVE_P0 = "at_or_above_p0"

_P0_EPS = 1e-15
_SMALLEST_NORMAL = sys.float_info.min


@dataclass(frozen=True)
class RefineContext:
    """Per-``(n, k)`` constants: ``alpha``, the Stirling correction and ``p0``.

    ``p0`` is solved for on construction, so instances are immutable.
    """

    n: int
    k: int
    alpha: float = field(init=False)
    stirling_corr: float = field(init=False)
    p0: float = field(init=False)

    def __post_init__(self):
        n, k = self.n, self.k
        if isinstance(n, bool) or not isinstance(n, int) or n < 2:
            raise DomainError(f"n must be an integer >= 2, got {n!r}")
        if isinstance(k, bool) or not isinstance(k, int) or not (0 <= k <= n - 2):
            raise DomainError(f"k must be an integer in [0, {n - 2}], got {k!r}")
        object.__setattr__(self, "alpha", (k + 1) / n)
        object.__setattr__(self, "stirling_corr", stirling_correction(n, k))
        object.__setattr__(self, "p0", find_p0(self))

    @property
    def lead(self):
        """``exp(S) * sqrt(alpha / (1 - alpha))``, the constant part of ``g``."""
        return math.exp(self.stirling_corr) * math.sqrt((self.k + 1) / (self.n - self.k - 1))


@dataclass(frozen=True)
class DeltaBound:
    p: float
    bound: float
    branch: str


def _check_z(z, name="z"):
    if not (0.0 < z < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {z!r}")


def _curvature(z, ctx):
    # B(z) / (alpha - z)**2
    alpha = ctx.alpha
    return entropy_curvature(alpha, (ctx.n - ctx.k - 1) / ctx.n, z, 1.0 - z, alpha - z)


def _shape(z, ctx):
    # sqrt((z - alpha)**2 / (2 (1-z)**2 B(z))), the varying part of g
    return 1.0 / ((1.0 - z) * math.sqrt(2.0 * _curvature(z, ctx)))


def g_function(z, ctx):
    """``exp(S) sqrt(alpha/(1-alpha)) - sqrt((z-alpha)**2 / (2 (1-z)**2 B(z)))``.

    Strictly decreasing on (0, 1); at ``z = alpha`` the removable singularity
    takes its limit ``(exp(S) - 1) * sqrt(alpha/(1-alpha))``.
    """
    _check_z(z)
    return ctx.lead - _shape(z, ctx)


def _factor(z, ctx, lead):
    # signed r(z) = g(z) / lead
    return 1.0 - _shape(z, ctx) / lead


def find_p0(ctx, tol=1e-12):
    """The unique zero of :func:`g_function`, by bisection on ``(1e-15, 1 - 1e-15)``.

    Stops once ``|g| <= tol`` or the bracket cannot be halved any further.
    """
    lead = math.exp(ctx.stirling_corr) * math.sqrt((ctx.k + 1) / (ctx.n - ctx.k - 1))

    def g(z):
        return lead - _shape(z, ctx)

    lo, hi = _P0_EPS, 1.0 - _P0_EPS
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo > 0.0 > g_hi):
        raise RootBracketError(
            f"no sign change of g on [{lo}, {hi}] for n={ctx.n}, k={ctx.k}: "
            f"g(lo)={g_lo!r}, g(hi)={g_hi!r}"
        )
    best, best_abs = lo, abs(g_lo)
    while True:
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        g_mid = g(mid)
        if abs(g_mid) < best_abs:
            best, best_abs = mid, abs(g_mid)
        if abs(g_mid) <= tol or g_mid == 0.0:
            return mid
        if g_mid > 0.0:
            lo = mid
        else:
            hi = mid
    return best


def _search_points(lo, hi):
    # 256 points in (lo, hi), geometric towards both ends
    edge = [10.0 ** (-12.0 + 11.0 * i / 63.0) for i in range(64)]
    middle = [0.1 + 0.8 * (i + 0.5) / 128.0 for i in range(128)]
    fractions = edge + middle + [1.0 - s for s in reversed(edge)]
    width = hi - lo
    points = []
    for s in fractions:
        z = lo + s * width
        if lo < z < hi:
            points.append(z)
    return points


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(func, a, b, rel_tol=1e-8):
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    best_z, best_v = (c, fc) if fc >= fd else (d, fd)
    while abs(b - a) > rel_tol * max(abs(a), abs(b), 1e-300):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
        for z, v in ((c, fc), (d, fd)):
            if v > best_v:
                best_z, best_v = z, v
    return best_z, best_v


def _sup(func, lo, hi):
    points = _search_points(lo, hi)
    if not points:
        return 0.0
    values = [func(z) for z in points]
    i = max(range(len(values)), key=values.__getitem__)
    best = values[i]
    a = points[i - 1] if i > 0 else lo
    b = points[i + 1] if i + 1 < len(points) else hi
    if a < b:
        _, polished = _golden_max(func, a, b)
        best = max(best, polished)
    return best


def delta_refined_bound(p, ctx):
    """Certified upper bound (<= 0) for ``delta(p)``.

    The supremum over ``z`` is searched on a 256-point grid refined by a
    golden-section pass; only the sign-correct part of ``r(z)`` enters, so a
    ``p0`` that is off in its last digits cannot flip the bound.
    """
    _check_z(p, "p")
    n, k = ctx.n, ctx.k
    lead = ctx.lead

    if p >= ctx.p0:
        def objective(z):
            r = _factor(z, ctx, lead)
            if r >= 0.0:
                return 0.0
            return -r * c_bound(BinomialParams(n, z), k)

        sup = _sup(objective, p, 1.0)
        branch = AT_OR_ABOVE_P0
    else:
        def objective(z):
            r = _factor(z, ctx, lead)
            if r <= 0.0:
                return 0.0
            return r * c_bound_sf(BinomialParams(n, z), k + 1)

        sup = _sup(objective, 0.0, p)
        branch = BELOW_P0
    return DeltaBound(p=p, bound=-sup if sup > 0.0 else 0.0, branch=branch)


def _integrand(ctx, lead):
    n = ctx.n
    root_n = math.sqrt(n)
    alpha = ctx.alpha

    def fg(z):
        curv = _curvature(z, ctx)
        a = (alpha - z) * math.sqrt(2.0 * curv)
        t = a * root_n
        dens = INV_SQRT_2PI * math.exp(-0.5 * t * t)
        if dens == 0.0:
            return 0.0
        g = lead - 1.0 / ((1.0 - z) * math.sqrt(2.0 * curv))
        return dens * root_n / z * g

    return fg


def delta_numeric(p, ctx, rel_tol=1e-10):
    """``delta(p)`` by adaptive quadrature of ``-f*g``; a diagnostic, not a bound.

    Below ``p0`` the integral runs over ``(0, p)``, above it over ``(p, 1)``
    (``delta`` vanishes at both ends), which keeps the integrated mass small.
    """
    _check_z(p, "p")
    if not rel_tol >= 1e-12:
        raise DomainError(f"rel_tol must be >= 1e-12, got {rel_tol!r}")
    lead = ctx.lead
    fg = _integrand(ctx, lead)
    alpha = ctx.alpha
    sigma = math.sqrt(alpha * (1.0 - alpha) / ctx.n)
    marks = [alpha, ctx.p0]
    for c in (1.0, 3.0, 6.0, 10.0):
        marks += [alpha - c * sigma, alpha + c * sigma]
    if p < ctx.p0:
        value, _ = integrate(fg, 0.0, p, abs_tol=1e-14, rel_tol=rel_tol, breakpoints=marks)
        return -value
    value, _ = integrate(fg, p, 1.0, abs_tol=1e-14, rel_tol=rel_tol, breakpoints=marks)
    return value


def refined_upper(params, k, ctx=None):
    """``C(k+1) + delta_refined_bound``, never below ``C(k)`` and never above ``C(k+1)``.

    Where the sum would leave the normal float range the unrefined ``C(k+1)``
    is returned, since a subnormal result no longer carries a usable margin.
    """
    if ctx is None:
        ctx = RefineContext(params.n, k)
    elif (ctx.n, ctx.k) != (params.n, k):
        raise DomainError("context does not match (n, k)")
    upper = c_bound(params, k + 1)
    if upper < _SMALLEST_NORMAL:
        # no digits left to refine; the log forms are the tool down here
        return upper
    bound = delta_refined_bound(params.p, ctx).bound
    refined = upper + bound
    if refined < _SMALLEST_NORMAL:
        return upper
    return max(refined, c_bound(params, k))


def normal_part(p, ctx):
    """``Phi(a(p) * sqrt(n))``, which equals ``C_{n,p}(k+1)``."""
    _check_z(p, "p")
    a = (ctx.alpha - p) * math.sqrt(2.0 * _curvature(p, ctx))
    return std_normal_cdf(a * math.sqrt(ctx.n))
