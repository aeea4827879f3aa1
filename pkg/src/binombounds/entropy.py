"""Relative entropy of Bernoulli laws and the related B(z), a(z) functions.

``H(x, p) = x*log(x/p) + (1-x)*log((1-x)/(1-p))`` loses all its digits to
cancellation when ``x`` is close to ``p``.  We write it as

    H = p*h(u) + (1-p)*h(v),    u = (x-p)/p,  v = (p-x)/(1-p),

with ``h(u) = (1+u)*log1p(u) - u >= 0``.  Both terms are nonnegative, and
``h`` is evaluated from its Taylor series when ``|u|`` is small, so the
result keeps full relative accuracy right down to ``x == p``.
"""

import math

from .exceptions import DomainError
from .special import two_product

__all__ = [
    "relative_entropy",
    "sign_of",
    "b_function",
    "a_function",
    "entropy_curvature",
    "lattice_deviation",
]

_SERIES_CUTOFF = 0.1
# h(u)/u**2 = sum_{m>=2} (-u)**(m-2) / (m*(m-1)); 18 terms cover |u| < 0.1
_H2_COEFFS = tuple(1.0 / (m * (m - 1)) for m in range(2, 20))


def _h_over_sq(u):
    """``h(u)/u**2`` for ``u >= -1``."""
    if abs(u) < _SERIES_CUTOFF:
        total = 0.0
        for c in reversed(_H2_COEFFS):
            total = c - u * total
        return total
    if u == -1.0:
        return 1.0
    return ((1.0 + u) * math.log1p(u) - u) / (u * u)


def _term(x, p, d):
    """``p*h(d/p) = x*log(x/p) - d`` where ``x = p + d``."""
    u = d / p
    if abs(u) < _SERIES_CUTOFF:
        return d * (d / p) * _h_over_sq(u)
    if x <= 0.0:
        return p
    ratio = x / p
    if math.isinf(ratio):
        # p is subnormal or nearly so
        return x * (math.log(x) - math.log(p)) - d
    return x * math.log(ratio) - d


def _entropy(x, y, p, q, d):
    # H(x, p) with y = 1-x, q = 1-p and d = x-p supplied by the caller
    if d == 0.0:
        return 0.0
    return _term(x, p, d) + _term(y, q, -d)


def entropy_curvature(x, y, p, q, d):
    """``H(x, p) / (x - p)**2``, finite and positive even at ``x == p``.

    Arguments as for the internal entropy kernel: ``y = 1-x``, ``q = 1-p``,
    ``d = x-p``.  At ``d == 0`` the limit ``1/(2*p*q)`` is returned.
    """
    if d == 0.0:
        return 0.5 / (p * q)
    u = d / p
    v = -d / q
    if abs(u) < _SERIES_CUTOFF and abs(v) < _SERIES_CUTOFF:
        return _h_over_sq(u) / p + _h_over_sq(v) / q
    return _entropy(x, y, p, q, d) / (d * d)


def _check_p(p, name="p"):
    if not (0.0 < p < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {p!r}")


def relative_entropy(x, p):
    """Kullback-Leibler divergence between Bernoulli(x) and Bernoulli(p), in nats.

    ``0*log(0)`` is taken as 0, so ``x`` may be 0 or 1.
    """
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    _check_p(p)
    return _entropy(x, 1.0 - x, p, 1.0 - p, x - p)


def lattice_deviation(k, n, p):
    """Return ``(k/n - p)`` without the rounding of ``k/n`` leaking in.

    ``n*p`` is formed exactly as a double-double so that a lattice point
    sitting within an ulp of ``p`` still gets the right sign, and an exact
    hit ``k == n*p`` gives exactly 0.
    """
    hi, lo = two_product(float(n), p)
    return ((k - hi) - lo) / n


def sign_of(x):
    """-1, 0 or +1, with ``sign_of(0) == 0``."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def b_function(z, alpha):
    """``B(z) = alpha*log(alpha/z) + (1-alpha)*log((1-alpha)/(1-z))``.

    This is ``relative_entropy(alpha, z)``: zero only at ``z == alpha``,
    decreasing to the left of it and increasing to the right.
    """
    _check_p(z, "z")
    _check_p(alpha, "alpha")
    return _entropy(alpha, 1.0 - alpha, z, 1.0 - z, alpha - z)


def a_function(z, alpha):
    """Signed root of ``B(z) = a(z)**2 / 2``, positive for ``z < alpha``.

    Computed as ``(alpha - z) * sqrt(2*B(z)/(alpha - z)**2)`` so the removable
    0/0 at ``z == alpha`` never arises; ``a(alpha)`` is exactly 0.
    """
    _check_p(z, "z")
    _check_p(alpha, "alpha")
    d = alpha - z
    if d == 0.0:
        return 0.0
    return d * math.sqrt(2.0 * entropy_curvature(alpha, 1.0 - alpha, z, 1.0 - z, d))
