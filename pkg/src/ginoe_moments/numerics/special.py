"""Gamma family, error function and double factorial.

Internal helpers prefixed with ``_`` run at mpmath's current precision and
return :class:`BigReal` balls; the public functions take a
:class:`PrecisionContext`, compute at its working precision and round to its
target precision.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral

import mpmath
from mpmath import mpc, mpf

from ..errors import DomainError, PoleError
from .ball import BigReal, _eps
from .context import DEFAULT_CONTEXT, PrecisionContext


def _is_nonpositive_integer(z) -> bool:
    if isinstance(z, mpc):
        if mpmath.im(z) != 0:
            return False
        z = mpmath.re(z)
    return z <= 0 and mpmath.isint(z)


def _as_exact_mpf(a) -> mpf:
    if isinstance(a, BigReal):
        if a.rad:
            raise DomainError("shape parameter must be exact")
        return a.mid
    return BigReal(a).mid


# -- Gamma ------------------------------------------------------------------

def _gamma(x) -> BigReal:
    """Gamma of a (real or complex) ball, via reflection for Re(x) < 1/2."""
    x = BigReal.coerce(x)
    if _is_nonpositive_integer(x.mid):
        raise PoleError(f"Gamma has a pole at {x.mid}")
    if mpmath.re(x.mid) < 0.5:
        # Gamma(x) Gamma(1-x) = pi / sin(pi x)
        from .ball import pi, sin
        p = pi()
        return p / (sin(p * x) * _gamma(1 - x))
    g = mpmath.gamma(x.mid)
    prop = mpf(0)
    if x.rad:
        # |Gamma'| = |Gamma psi|; doubled to cover variation across the ball
        prop = 2 * x.rad * abs(g) * (abs(mpmath.digamma(x.mid)) + 1)
    return BigReal._raw(g, prop + abs(g) * _eps() * 16)


def _rgamma_ratio(a, b) -> BigReal:
    """Gamma(a) / Gamma(b) for balls, through log-gamma for large arguments."""
    a, b = BigReal.coerce(a), BigReal.coerce(b)
    if abs(a.mid) < 200 and abs(b.mid) < 200:
        return _gamma(a) / _gamma(b)
    lg = mpmath.loggamma(a.mid) - mpmath.loggamma(b.mid)
    v = mpmath.exp(lg)
    scale = abs(a.mid) + abs(b.mid)
    prop = 2 * (a.rad * (abs(mpmath.digamma(a.mid)) + 1) + b.rad * (abs(mpmath.digamma(b.mid)) + 1))
    return BigReal._raw(v, abs(v) * (prop + _eps() * 64 * (1 + mpmath.log(scale))))


def gamma_fn(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    with ctx.working():
        return _gamma(x).rounded(ctx.target_bits)


# -- incomplete gamma -------------------------------------------------------

def _cf_threshold(a: mpf) -> mpf:
    # below this the continued fraction converges too slowly at this precision
    w = mpmath.mp.prec * 0.1733
    return max(a + 1, w * w / 64)


def _lower_series(a: mpf, x: mpf):
    """gamma(a, x) = x^a e^-x sum_n x^n / (a)_{n+1}; all terms positive."""
    if x == 0:
        return mpf(0), mpf(0)
    u = _eps()
    term = 1 / a
    total = term
    n = 0
    while True:
        n += 1
        term = term * x / (a + n)
        total += term
        r = x / (a + n + 1)
        if r < 0.5 and term * r / (1 - r) < total * u:
            break
        if n > 100000:
            raise ArithmeticError("incomplete gamma series failed to converge")
    tail = term * r / (1 - r)
    pref = mpmath.exp(a * mpmath.log(x) - x)
    val = pref * total
    err = pref * tail + abs(val) * u * (3 * n + 40)
    return val, err


def _upper_cf(a: mpf, x: mpf):
    """Gamma(a, x) by the Legendre continued fraction (modified Lentz)."""
    u = _eps()
    tiny = mpmath.ldexp(1, -4 * mpmath.mp.prec)
    b = x + 1 - a
    c = 1 / tiny
    d = 1 / b
    h = d
    prev = h
    i = 0
    while True:
        i += 1
        an = -i * (i - a)
        b += 2
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        h *= d * c
        if abs(h - prev) <= abs(h) * u and i > 2:
            break
        prev = h
        if i > 200000:
            raise ArithmeticError("incomplete gamma continued fraction failed to converge")
    pref = mpmath.exp(a * mpmath.log(x) - x)
    val = pref * h
    # convergents bracket the tail; the last step bounds the truncation
    err = pref * 2 * abs(h - prev) + abs(val) * u * (4 * i + 40)
    return val, err


def _upper_finite(n: int, x: mpf):
    """Gamma(n, x) = (n-1)! e^-x sum_{k<n} x^k/k! for integer n >= 1."""
    u = _eps()
    term = mpf(1)
    total = mpf(1)
    for k in range(1, n):
        term = term * x / k
        total += term
    val = mpmath.factorial(n - 1) * mpmath.exp(-x) * total
    return val, abs(val) * u * (3 * n + 40)


def _upper_gamma(a: mpf, x: mpf) -> BigReal:
    if a <= 0:
        raise DomainError("upper incomplete gamma requires a > 0")
    if x < 0:
        raise DomainError("incomplete gamma requires x >= 0")
    if x == 0:
        return _gamma(a)
    if mpmath.isint(a) and a < 4096:
        return BigReal._raw(*_upper_finite(int(a), x))
    if x >= _cf_threshold(a):
        return BigReal._raw(*_upper_cf(a, x))
    # Gamma(a) - gamma(a, x) cancels ~ x/ln 2 bits; pay for them up front
    extra = int(x * 1.4427) + 16
    with mpmath.extraprec(extra):
        lo, lo_err = _lower_series(a, x)
        g = _gamma(a)
        val = g.mid - lo
        err = g.rad + lo_err + abs(val) * _eps()
    return BigReal._raw(+val, err + abs(val) * _eps())


def _lower_gamma(a: mpf, x: mpf) -> BigReal:
    if a <= 0:
        raise DomainError("lower incomplete gamma requires a > 0")
    if x < 0:
        raise DomainError("incomplete gamma requires x >= 0")
    if x < _cf_threshold(a):
        return BigReal._raw(*_lower_series(a, x))
    up = _upper_gamma(a, x)
    return _gamma(a) - up


def _x_derivative_bound(a: mpf, x: BigReal) -> mpf:
    """sup of t^(a-1) e^-t over the ball x, used to push x.rad through."""
    lo = max(x.mid - x.rad, mpf(0))
    hi = x.mid + x.rad
    cands = [lo, hi]
    if lo < a - 1 < hi:
        cands.append(a - 1)
    best = mpf(0)
    for t in cands:
        if t == 0:
            if a < 1:
                return mpmath.inf
            v = mpf(1) if a == 1 else mpf(0)
        else:
            v = mpmath.exp((a - 1) * mpmath.log(t) - t)
        best = max(best, v)
    return best


def _incgamma(kind: str, a, x) -> BigReal:
    a = _as_exact_mpf(a)
    xb = BigReal.coerce(x)
    if xb.is_complex:
        raise DomainError("incomplete gamma is implemented for real x only")
    if xb.mid < 0:
        raise DomainError("incomplete gamma requires x >= 0")
    res = _upper_gamma(a, xb.mid) if kind == "upper" else _lower_gamma(a, xb.mid)
    if xb.rad:
        res = BigReal._raw(res.mid, res.rad + xb.rad * _x_derivative_bound(a, xb))
    return res


def upper_incomplete_gamma(a, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """Gamma(a, x) = int_x^inf t^(a-1) e^-t dt for a > 0, x >= 0."""
    with ctx.working():
        return _incgamma("upper", a, x).rounded(ctx.target_bits)


def lower_incomplete_gamma(a, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """gamma(a, x) = int_0^x t^(a-1) e^-t dt for a > 0, x >= 0."""
    with ctx.working():
        return _incgamma("lower", a, x).rounded(ctx.target_bits)


# -- error function ---------------------------------------------------------

_HALF = mpf(0.5)


def _erf(x) -> BigReal:
    xb = BigReal.coerce(x)
    if xb.is_complex:
        raise DomainError("erf is implemented for real x only")
    m = xb.mid
    if m == 0:
        val = BigReal._raw(mpf(0), mpf(0))
    else:
        y = m * m
        sp = mpmath.sqrt(mpmath.pi)
        if y < _cf_threshold(_HALF):
            g = BigReal._raw(*_lower_series(_HALF, y))
        else:
            g = _gamma(_HALF) - BigReal._raw(*_upper_cf(_HALF, y))
        val = g / BigReal._raw(sp, sp * _eps())
        if m < 0:
            val = -val
    if xb.rad:
        # |erf'| <= 2/sqrt(pi)
        val = BigReal._raw(val.mid, val.rad + xb.rad * mpf(2) / mpmath.sqrt(mpmath.pi))
    return val


def _erfc(x) -> BigReal:
    xb = BigReal.coerce(x)
    if xb.is_complex:
        raise DomainError("erfc is implemented for real x only")
    m = xb.mid
    if m <= 0:
        return 1 - _erf(xb)
    y = m * m
    if y < _cf_threshold(_HALF):
        return 1 - _erf(xb)
    sp = mpmath.sqrt(mpmath.pi)
    val = BigReal._raw(*_upper_cf(_HALF, y)) / BigReal._raw(sp, sp * _eps())
    if xb.rad:
        lo = max(m - xb.rad, mpf(0))
        val = BigReal._raw(val.mid, val.rad + xb.rad * 2 * mpmath.exp(-lo * lo) / sp)
    return val


def erf_fn(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    with ctx.working():
        return _erf(x).rounded(ctx.target_bits)


def erfc_fn(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    with ctx.working():
        return _erfc(x).rounded(ctx.target_bits)


# -- combinatorics ----------------------------------------------------------

def double_factorial(n: int) -> int:
    """n!! with the empty-product convention (-1)!! = 0!! = 1."""
    if not isinstance(n, Integral):
        raise TypeError("double_factorial takes an integer")
    n = int(n)
    if n < -1:
        raise DomainError("double factorial is defined for n >= -1")
    result = 1
    for k in range(n, 0, -2):
        result *= k
    return result


def gamma_half_integer_over_sqrt_pi(two_a: int) -> Fraction:
    """Gamma(two_a/2)/sqrt(pi) as an exact rational, for odd two_a."""
    if two_a % 2 == 0:
        raise ValueError("argument must be a half-integer")
    # Gamma(1/2) = sqrt(pi); Gamma(a+1) = a Gamma(a)
    val = Fraction(1)
    a = Fraction(1, 2)
    target = Fraction(two_a, 2)
    while a < target:
        val *= a
        a += 1
    while a > target:
        a -= 1
        val /= a
    return val


def pochhammer_exact(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def factorial(n: int) -> int:
    return math.factorial(n)
