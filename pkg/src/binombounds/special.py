"""Standard normal distribution and Stirling remainders.

Everything here works on plain Python floats.  The normal CDF is built on
``math.erf``/``math.erfc`` with a correction for the rounding of ``x/sqrt(2)``,
and the log-CDF switches to a Mills-ratio expansion in the lower tail where
``Phi(x)`` itself underflows.
"""

import math

from .exceptions import DomainError

__all__ = [
    "std_normal_pdf",
    "std_normal_cdf",
    "std_normal_sf",
    "log_std_normal_cdf",
    "std_normal_quantile",
    "stirling_remainder",
    "stirling_correction",
    "two_product",
]

INV_SQRT_2PI = 0.3989422804014327  # 1/sqrt(2*pi)
LOG_SQRT_2PI = 0.9189385332046728  # log(sqrt(2*pi))
INV_SQRT_PI = 0.5641895835477563  # 1/sqrt(pi)

# 1/sqrt(2) as an unevaluated sum hi + lo
_INV_SQRT2_HI = 0.7071067811865476
_INV_SQRT2_LO = -4.833646656726457e-17

_SPLITTER = 134217729.0  # 2**27 + 1


def _require_finite(x, name="x"):
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def two_product(a, b):
    """Return ``(p, e)`` with ``p = fl(a*b)`` and ``a*b == p + e`` exactly.

    Dekker's splitting; valid while no intermediate overflows.
    """
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def std_normal_pdf(x):
    """Standard normal density ``exp(-x**2/2)/sqrt(2*pi)``."""
    _require_finite(x)
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


def _scaled_arg(x):
    # x/sqrt(2) as hi + lo
    hi, err = two_product(x, _INV_SQRT2_HI)
    lo = err + x * _INV_SQRT2_LO
    s = hi + lo
    return s, lo - (s - hi)


def std_normal_cdf(x):
    """Standard normal distribution function ``Phi(x)``.

    Underflows to 0 below about -38.5; use :func:`log_std_normal_cdf` there.
    """
    _require_finite(x)
    if abs(x) < 0.5:
        z, dz = _scaled_arg(x)
        return 0.5 + 0.5 * math.erf(z) + INV_SQRT_PI * math.exp(-z * z) * dz
    if x < 0:
        return _tail(-x)
    return 1.0 - _tail(x)


def std_normal_sf(x):
    """Survival function ``1 - Phi(x)`` without cancellation for large ``x``."""
    _require_finite(x)
    return std_normal_cdf(-x)


def _tail(t):
    # 1 - Phi(t) = Phi(-t) for t >= 0.5
    z, dz = _scaled_arg(t)
    # d/dz [erfc(z)/2] = -exp(-z*z)/sqrt(pi)
    return 0.5 * math.erfc(z) - INV_SQRT_PI * math.exp(-z * z) * dz


# Mills ratio R(t) = (1 - Phi(t)) / phi(t)
_MILLS_SERIES_FROM = 30.0


def _mills_ratio(t):
    if t >= _MILLS_SERIES_FROM:
        # asymptotic series 1/t * sum (-1)^m (2m-1)!! / t^(2m), 9 terms
        inv2 = 1.0 / (t * t)
        total = 0.0
        term = 1.0
        for m in range(9):
            total += term
            term *= -(2 * m + 1) * inv2
        return total / t
    # continued fraction R(t) = 1/(t + 1/(t + 2/(t + 3/(t + ...)))), modified Lentz
    tiny = 1e-300
    f = t
    c = t
    d = 0.0
    for j in range(1, 500):
        d = t + j * d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = t + j / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return 1.0 / f
    return 1.0 / f


def log_std_normal_cdf(x):
    """Natural log of ``Phi(x)``, finite for every finite ``x``."""
    _require_finite(x)
    if x > 0.0:
        return math.log1p(-std_normal_cdf(-x))
    if x > -10.0:
        return math.log(std_normal_cdf(x))
    t = -x
    return -0.5 * t * t - LOG_SQRT_2PI + math.log(_mills_ratio(t))


# Acklam's rational approximation for the normal quantile
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549671010229297e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_Q_LOW = 0.02425


def _acklam(q):
    if q < _Q_LOW:
        r = math.sqrt(-2.0 * math.log(q))
        num = ((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]
        den = (((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0
        return num / den
    u = q - 0.5
    r = u * u
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * u
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def std_normal_quantile(q):
    """Inverse of :func:`std_normal_cdf` on the open interval (0, 1).

    Acklam's approximation (relative error about 1e-9) polished by two
    Newton steps against ``std_normal_cdf``.
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in (0, 1), got {q!r}")
    if q > 0.5:
        # 1 - q is exact here
        return -std_normal_quantile(1.0 - q)
    if q == 0.5:
        return 0.0
    x = _acklam(q)
    for _ in range(2):
        dens = std_normal_pdf(x)
        if dens == 0.0:
            break
        x -= (std_normal_cdf(x) - q) / dens
    return x


# Bernoulli-number coefficients B_2m / (2m (2m-1)) of the Stirling series
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_SERIES_FROM = 10


def _stirling_series(n):
    x = float(n)
    inv2 = 1.0 / (x * x)
    total = 0.0
    for coef in reversed(_STIRLING_COEFFS):
        total = coef + inv2 * total
    return total / x


def stirling_remainder(n):
    """Remainder ``S_n`` in ``n! = sqrt(2*pi*n) * (n/e)**n * exp(S_n)``.

    The asymptotic series is used from ``n = 10`` on, where eight terms are
    good to a few ulps.  Below that the exact step
    ``S_m - S_{m+1} = (m + 1/2) * log1p(1/m) - 1`` walks down from ``S_10``;
    going through ``lgamma`` instead would cancel away most of the digits.
    """
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if n >= _SERIES_FROM:
        return _stirling_series(n)
    s = _stirling_series(_SERIES_FROM)
    for m in range(_SERIES_FROM - 1, n - 1, -1):
        s += (m + 0.5) * math.log1p(1.0 / m) - 1.0
    return s


def stirling_correction(n, k):
    """``S_n - S_{k+1} - S_{n-k-1}`` for ``0 <= k <= n - 2``.

    Always negative, since ``S`` decreases and both subtracted indices are
    below ``n``.
    """
    if not (0 <= k <= n - 2):
        raise DomainError(f"need 0 <= k <= n-2, got n={n}, k={k}")
    return stirling_remainder(n) - stirling_remainder(k + 1) - stirling_remainder(n - k - 1)
