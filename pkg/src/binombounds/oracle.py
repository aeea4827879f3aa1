"""Reference values of the binomial law used to check the bounds.

Two independent routes:

* exact rational arithmetic on the defining sum, with ``p`` given as a
  fraction ``p_num / p_den`` (a float converts to its exact binary value);
* the incomplete-beta form ``P{X <= k} = n*C(n-1, k) * int_p^1 z^k (1-z)^(n-k-1) dz``
  evaluated by a Lentz continued fraction, for sizes beyond the exact limit.

Exact results share the common denominator ``p_den**n`` and are not reduced.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .entropy import _entropy, lattice_deviation
from .exceptions import CapacityError, ConvergenceError, DomainError
from .special import LOG_SQRT_2PI, stirling_remainder

__all__ = [
    "EXACT_LIMIT",
    "ExactProb",
    "as_rational",
    "exact_cdf",
    "exact_pmf",
    "exact_cdf_table",
    "cdf_beta",
    "log_cdf_beta",
    "sf_beta",
    "log_sf_beta",
    "log_pmf",
]

EXACT_LIMIT = 5000

# ln 2 split so that e * _LN2_HI is exact for |e| < 2**20
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10


@dataclass(frozen=True)
class ExactProb:
    """A probability ``numerator / denominator`` held in exact integers."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1 or not (0 <= self.numerator <= self.denominator):
            raise DomainError(f"not a probability: {self.numerator}/{self.denominator}")

    def as_fraction(self):
        return Fraction(self.numerator, self.denominator)

    def __float__(self):
        # int / int is correctly rounded for arbitrary sizes
        return self.numerator / self.denominator

    def complement(self):
        return ExactProb(self.denominator - self.numerator, self.denominator)

    def log(self):
        """Natural log, accurate to a few ulps even far below float range."""
        num, den = self.numerator, self.denominator
        if num == 0:
            return -math.inf
        if 2 * num >= den:
            return math.log1p(-((den - num) / den))
        shift = num.bit_length() - den.bit_length()
        # num * 2**-shift / den lies in (1/2, 2); int / int rounds correctly
        ratio = (num << -shift) / den
        return shift * _LN2_HI + (math.log(ratio) + shift * _LN2_LO)

    def compare_float(self, x):
        """Sign of ``x - self`` computed exactly: -1, 0 or +1."""
        a, b = float(x).as_integer_ratio()
        lhs = a * self.denominator
        rhs = self.numerator * b
        return (lhs > rhs) - (lhs < rhs)


def as_rational(p):
    """``(num, den)`` for a float, Fraction, int or ``"a/b"``/decimal string."""
    if isinstance(p, str):
        frac = Fraction(p.strip())
    elif isinstance(p, float):
        frac = Fraction(*p.as_integer_ratio())
    else:
        frac = Fraction(p)
    return frac.numerator, frac.denominator


def _check_rational(n, p_num, p_den, limit):
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    if p_den < 1 or not (0 <= p_num <= p_den):
        raise DomainError(f"p must be a fraction in [0, 1], got {p_num}/{p_den}")
    if limit is not None and n > limit:
        raise CapacityError(
            f"n={n} exceeds the exact oracle limit {limit}; use cdf_beta instead"
        )


def _check_k(n, k, top):
    if isinstance(k, bool) or not isinstance(k, int) or not (0 <= k <= top):
        raise DomainError(f"k must be an integer in [0, {top}], got {k!r}")


def _lower_sum(n, a, b, k):
    # sum_{m<=k} C(n,m) a^m b^(n-m), walking up from m = 0
    term = b**n
    total = term
    for m in range(k):
        term = term * (n - m) * a // ((m + 1) * b)
        total += term
    return total


def _upper_sum(n, a, b, k):
    # sum_{m>k} C(n,m) a^m b^(n-m), walking down from m = n
    term = a**n
    total = term
    for m in range(n, k + 1, -1):
        term = term * m * b // ((n - m + 1) * a)
        total += term
    return total


def exact_cdf(n, p_num, p_den, k, limit=EXACT_LIMIT):
    """``P{X <= k}`` for ``X ~ Bin(n, p_num/p_den)`` as an exact fraction."""
    _check_rational(n, p_num, p_den, limit)
    _check_k(n, k, n)
    a, b = p_num, p_den - p_num
    den = p_den**n
    if k == n or a == 0:
        return ExactProb(den, den)
    if b == 0:
        return ExactProb(0, den)
    if k + 1 <= n - k:
        return ExactProb(_lower_sum(n, a, b, k), den)
    return ExactProb(den - _upper_sum(n, a, b, k), den)


def exact_pmf(n, p_num, p_den, k, limit=EXACT_LIMIT):
    """``P{X = k}`` as an exact fraction."""
    _check_rational(n, p_num, p_den, limit)
    _check_k(n, k, n)
    a, b = p_num, p_den - p_num
    return ExactProb(math.comb(n, k) * a**k * b ** (n - k), p_den**n)


def exact_cdf_table(n, p_num, p_den, limit=EXACT_LIMIT):
    """Numerators of ``P{X <= k}`` for ``k = 0..n`` and their shared denominator.

    One pass over the terms; this is what the verification sweeps use.
    """
    _check_rational(n, p_num, p_den, limit)
    a, b = p_num, p_den - p_num
    den = p_den**n
    if a == 0:
        return [den] * (n + 1), den
    if b == 0:
        return [0] * n + [den], den
    term = b**n
    total = term
    cumulative = [total]
    for m in range(n):
        term = term * (n - m) * a // ((m + 1) * b)
        total += term
        cumulative.append(total)
    return cumulative, den


def _check_float_p(n, p):
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")


def log_pmf(n, p, k):
    """``log P{X = k}`` through Stirling remainders and the entropy kernel.

    ``C(n,k) p^k (1-p)^(n-k) = exp(S_n - S_k - S_{n-k}) * sqrt(n/(2 pi k (n-k)))
    * exp(-n H(k/n, p))``, which avoids the cancellation of log-gamma
    differences.
    """
    _check_float_p(n, p)
    _check_k(n, k, n)
    if k == 0:
        return n * math.log1p(-p)
    if k == n:
        return n * math.log(p)
    d = lattice_deviation(k, n, p)
    h = _entropy(k / n, (n - k) / n, p, 1.0 - p, d)
    corr = stirling_remainder(n) - stirling_remainder(k) - stirling_remainder(n - k)
    return corr + 0.5 * math.log(n / (k * (n - k))) - LOG_SQRT_2PI - n * h


_TINY = 1e-300


def _beta_cf(a, b, x, max_iter):
    # continued fraction of I_x(a, b), modified Lentz
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 2e-16:
            return h, m
    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}",
        estimate=h,
        iterations=max_iter,
    )


def _beta_parts(n, p, k):
    # P{X <= k} = I_{1-p}(n-k, k+1).  Returns (flipped, log_prefactor, cf):
    # not flipped: cdf = exp(log_prefactor) * cf
    # flipped:     cdf = 1 - exp(log_prefactor) * cf
    _check_float_p(n, p)
    _check_k(n, k, n - 1)
    a = float(n - k)
    b = float(k + 1)
    max_iter = 200 + 10 * int(math.sqrt(n))
    if 1.0 - p < (a + 1.0) / (a + b + 2.0):
        # prefactor (1-p)^a p^b / (a B(a, b)) = p * P{X = k}
        cf, _ = _beta_cf(a, b, 1.0 - p, max_iter)
        return False, math.log(p) + log_pmf(n, p, k), cf
    # 1 - I_p(b, a); prefactor p^b (1-p)^a / (b B(a, b)) = (1-p) * P{X = k+1}
    cf, _ = _beta_cf(b, a, p, max_iter)
    return True, math.log1p(-p) + log_pmf(n, p, k + 1), cf


def cdf_beta(n, p, k):
    """``P{X <= k}`` for ``0 <= k <= n-1`` through the incomplete-beta form."""
    flipped, log_pre, cf = _beta_parts(n, p, k)
    tail = math.exp(log_pre) * cf
    return 1.0 - tail if flipped else tail


def log_cdf_beta(n, p, k):
    """``log P{X <= k}``, finite where :func:`cdf_beta` underflows."""
    flipped, log_pre, cf = _beta_parts(n, p, k)
    if flipped:
        return math.log1p(-math.exp(log_pre) * cf)
    return log_pre + math.log(cf)


def sf_beta(n, p, k):
    """``P{X > k}``, accurate where :func:`cdf_beta` rounds to 1."""
    flipped, log_pre, cf = _beta_parts(n, p, k)
    tail = math.exp(log_pre) * cf
    return tail if flipped else 1.0 - tail


def log_sf_beta(n, p, k):
    """``log P{X > k}``."""
    flipped, log_pre, cf = _beta_parts(n, p, k)
    if flipped:
        return log_pre + math.log(cf)
    return math.log1p(-math.exp(log_pre) * cf)
