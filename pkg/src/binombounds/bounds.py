"""Entropy-based two-sided bounds for the binomial distribution function.

For ``X ~ Bin(n, p)`` and ``0 <= k <= n-1``::

    C(k) <= P{X <= k} <= C(k+1)

where ``C(0) = (1-p)**n``, ``C(n) = 1 - p**n`` and, for ``0 < k < n``,
``C(k) = Phi(sign(k/n - p) * sqrt(2*n*H(k/n, p)))``.  The upper bound at
``k`` is the lower bound at ``k+1``, which is what lets a quantile be pinned
down to two consecutive integers.

Every bound is available in three forms: the value itself, its complement
``1 - C(k)`` (accurate when ``C(k)`` is close to 1) and its natural log
(finite far beyond the underflow point of the linear value).
"""

import math
from dataclasses import dataclass

from .entropy import _entropy, lattice_deviation
from .exceptions import DomainError
from .special import log_std_normal_cdf, std_normal_cdf, std_normal_quantile

__all__ = [
    "BinomialParams",
    "BoundPair",
    "QuantileBracket",
    "c_bound",
    "c_bound_sf",
    "c_bound_pair",
    "log_c_bound",
    "log_c_bound_sf",
    "cdf_bounds",
    "complement_bound",
    "bracket_quantile",
    "signed_root",
]


@dataclass(frozen=True)
class BinomialParams:
    """Number of trials ``n >= 1`` and success probability ``0 < p < 1``."""

    n: int
    p: float

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        if not (0.0 < self.p < 1.0):
            raise DomainError(f"p must lie in (0, 1), got {self.p!r}")


@dataclass(frozen=True)
class BoundPair:
    n: int
    p: float
    k: int
    lower: float
    upper: float
    log_lower: float
    log_upper: float


@dataclass(frozen=True)
class QuantileBracket:
    """``k_low <= quantile <= k_high`` with ``k_high - k_low`` in {0, 1}."""

    q: float
    k_low: int
    k_high: int


def _check_k(params, k, top):
    if isinstance(k, bool) or not isinstance(k, int) or not (0 <= k <= top):
        raise DomainError(f"k must be an integer in [0, {top}], got {k!r}")


def signed_root(params, k):
    """``sign(k/n - p) * sqrt(2*n*H(k/n, p))``, the normal argument of ``C(k)``.

    Defined for every ``0 <= k <= n``, but ``C(0)`` and ``C(n)`` do not use it.
    """
    _check_k(params, k, params.n)
    return _root(params.n, params.p, k)


def _root(n, p, k):
    d = lattice_deviation(k, n, p)
    if d == 0.0:
        return 0.0
    root = math.sqrt(2.0 * n * _entropy(k / n, (n - k) / n, p, 1.0 - p, d))
    return root if d > 0 else -root


def c_bound(params, k):
    """The bound sequence ``C_{n,p}(k)`` for ``0 <= k <= n``."""
    n, p = params.n, params.p
    _check_k(params, k, n)
    if k == 0:
        # 1 - p is already correctly rounded; exp(log1p(.)) may miss by an ulp
        return 1.0 - p if n == 1 else math.exp(n * math.log1p(-p))
    if k == n:
        return 1.0 - p if n == 1 else -math.expm1(n * math.log(p))
    return std_normal_cdf(_root(n, p, k))


def c_bound_sf(params, k):
    """``1 - C_{n,p}(k)``, computed without cancellation."""
    n, p = params.n, params.p
    _check_k(params, k, n)
    if n == 1:
        return p
    if k == 0:
        return -math.expm1(n * math.log1p(-p))
    if k == n:
        return math.exp(n * math.log(p))
    return std_normal_cdf(-_root(n, p, k))


def c_bound_pair(params, k):
    """``(C(k), 1 - C(k))`` from a single entropy evaluation."""
    n, p = params.n, params.p
    _check_k(params, k, n)
    if k == 0 or k == n:
        return c_bound(params, k), c_bound_sf(params, k)
    x = _root(n, p, k)
    return std_normal_cdf(x), std_normal_cdf(-x)


def log_c_bound(params, k):
    """Natural log of ``C_{n,p}(k)``; stays finite where ``C`` underflows."""
    n, p = params.n, params.p
    _check_k(params, k, n)
    if k == 0 or n == 1:
        return n * math.log1p(-p)
    if k == n:
        return math.log1p(-math.exp(n * math.log(p)))
    return log_std_normal_cdf(_root(n, p, k))


def log_c_bound_sf(params, k):
    """Natural log of ``1 - C_{n,p}(k)``."""
    n, p = params.n, params.p
    _check_k(params, k, n)
    if k == n or n == 1:
        return n * math.log(p)
    if k == 0:
        return math.log(-math.expm1(n * math.log1p(-p)))
    return log_std_normal_cdf(-_root(n, p, k))


def cdf_bounds(params, k):
    """Lower and upper bound for ``P{X <= k}``, ``0 <= k <= n-1``.

    The lower bound is attained at ``k = 0`` and the upper at ``k = n-1``;
    everywhere else both inequalities are strict.
    """
    _check_k(params, k, params.n - 1)
    return BoundPair(
        n=params.n,
        p=params.p,
        k=k,
        lower=c_bound(params, k),
        upper=c_bound(params, k + 1),
        log_lower=log_c_bound(params, k),
        log_upper=log_c_bound(params, k + 1),
    )


def complement_bound(params, k):
    """``1 - C_{n,1-p}(n-k)``, which equals ``C_{n,p}(k)``."""
    _check_k(params, k, params.n)
    mirrored = BinomialParams(params.n, 1.0 - params.p)
    return 1.0 - c_bound(mirrored, params.n - k)


def _solve_lattice_point(params, z):
    # x in [0, 1] with sign(x-p)*sqrt(2nH(x,p)) == z; the left side increases in x
    n, p = params.n, params.p
    q = 1.0 - p

    def psi(x):
        d = x - p
        return math.copysign(math.sqrt(2.0 * n * _entropy(x, 1.0 - x, p, q, d)), d)

    if z == 0.0:
        return p
    lo, hi = (0.0, p) if z < 0 else (p, 1.0)
    if z <= psi(0.0):
        return 0.0
    if z >= psi(1.0):
        return 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if psi(mid) < z:
            lo = mid
        else:
            hi = mid
    return hi


_EDGE_SLACK = 1e-14
_TINY = 1e-300


def _excess(params, k, q):
    # relative size of C(k) - q, measured on the tail that keeps its digits:
    # positive when C(k) > q.  Above 1/2 both sides are complemented (1 - q
    # is exact there), below the float range both are taken as logs.
    if q <= 0.5:
        value = c_bound(params, k)
        if q >= _TINY and value >= _TINY:
            return (value - q) / q
        return log_c_bound(params, k) - math.log(q)
    rest = 1.0 - q
    sf = c_bound_sf(params, k)
    if rest >= _TINY and sf >= _TINY:
        return (rest - sf) / rest
    return math.log(rest) - log_c_bound_sf(params, k)


def bracket_quantile(params, q):
    """Two consecutive integers that contain ``min{k : P{X <= k} >= q}``.

    With ``k* = min{k : C(k) >= q}`` the quantile is ``k*`` or ``k* - 1``:
    ``P{X <= k*} >= C(k*) >= q`` from the lower bound, and for ``k < k* - 1``
    the upper bound gives ``P{X <= k} <= C(k+1) < q``.  ``k*`` is found by
    inverting ``2*n*H(x, p) = Phi^{-1}(q)**2`` for ``x`` and then checking the
    lattice points next to ``n*x``.  Near ``q = 1`` the comparisons run on
    ``1 - C(k)`` against ``1 - q``, where rounding of ``C(k)`` to a value
    next to 1 would otherwise decide them.

    ``C(0) = P{X <= 0}`` and ``C(n) = P{X <= n-1}`` hold with equality, so
    near those two edges a rounding error in ``C`` could hide the true
    quantile; there the bracket is widened by one rather than trusting the
    last ulp.
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q!r}")
    n = params.n
    if _excess(params, n, q) < -_EDGE_SLACK:
        # every C(k) < q, so P{X <= n-1} <= C(n) < q and the quantile is n
        return QuantileBracket(q, n, n)
    if _excess(params, 0, q) >= _EDGE_SLACK:
        return QuantileBracket(q, 0, 0)

    x = _solve_lattice_point(params, std_normal_quantile(q))
    k = min(max(math.ceil(n * x), 1), n)
    while k > 1 and _excess(params, k - 1, q) >= 0.0:
        k -= 1
    while k < n and _excess(params, k, q) < 0.0:
        k += 1
    return QuantileBracket(q, k - 1, k)
