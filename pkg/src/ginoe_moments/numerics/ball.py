"""Midpoint-radius ("ball") arithmetic on top of mpmath.

A :class:`BigReal` is a value ``mid`` (``mpf`` or ``mpc``) together with a
radius ``rad`` such that the exact quantity lies within ``rad`` of ``mid``.
Complex values are disks, so a single radius bounds the joint error.

Every operation runs at mpmath's current working precision and adds the
rounding error of the midpoint to the propagated radius.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Integral

import mpmath
from mpmath import mpc, mpf
from mpmath.libmp import mpf_neg

_EPS_CACHE: dict[int, mpf] = {}

# mpmath elementary functions are accurate to a few ulp; budget 16 ulp
_FUNC_ULPS = 16


def _eps() -> mpf:
    prec = mpmath.mp.prec
    e = _EPS_CACHE.get(prec)
    if e is None:
        e = _EPS_CACHE[prec] = mpmath.ldexp(mpf(1), 2 - prec)
    return e


def _exact_mpf(x) -> tuple:
    """Convert a Python scalar to (mid, rad) at the current precision."""
    if isinstance(x, Integral):
        m = mpf(int(x))
        return m, (mpf(0) if m == int(x) else abs(m) * _eps())
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return _exact_mpf(x.numerator)
        m = mpf(x.numerator) / x.denominator
        d = x.denominator
        exact = (d & (d - 1)) == 0 and abs(x.numerator).bit_length() <= mpmath.mp.prec
        return m, (mpf(0) if exact else abs(m) * _eps())
    if isinstance(x, (mpf, float)):
        return mpf(x), mpf(0)
    if isinstance(x, (mpc, complex)):
        return mpc(x), mpf(0)
    raise TypeError(f"cannot convert {type(x).__name__} to BigReal")


class BigReal:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        if isinstance(mid, BigReal):
            self.mid, self.rad = mid.mid, mid.rad + abs(mpf(rad))
            return
        m, r = _exact_mpf(mid)
        self.mid = m
        self.rad = r + abs(mpf(rad))

    @classmethod
    def _raw(cls, mid, rad):
        obj = object.__new__(cls)
        obj.mid = mid
        obj.rad = rad
        return obj

    @staticmethod
    def coerce(x) -> BigReal:
        return x if isinstance(x, BigReal) else BigReal(x)

    # -- inspection ---------------------------------------------------------
    @property
    def is_complex(self) -> bool:
        return isinstance(self.mid, mpc)

    @property
    def real(self) -> BigReal:
        return BigReal._raw(mpmath.re(self.mid), self.rad)

    @property
    def imag(self) -> BigReal:
        return BigReal._raw(mpmath.im(self.mid), self.rad)

    def conjugate(self) -> BigReal:
        if not self.is_complex:
            return self
        re, im = self.mid._mpc_
        return BigReal._raw(mpmath.mp.make_mpc((re, mpf_neg(im))), self.rad)

    def mag(self) -> mpf:
        """Upper bound on the absolute value."""
        return abs(self.mid) + self.rad

    def mig(self) -> mpf:
        """Lower bound on the absolute value (0 if the ball contains 0)."""
        v = abs(self.mid) - self.rad
        return v if v > 0 else mpf(0)

    def contains(self, x) -> bool:
        return abs(self.mid - BigReal.coerce(x).mid) <= self.rad

    def overlaps(self, other) -> bool:
        o = BigReal.coerce(other)
        return abs(self.mid - o.mid) <= self.rad + o.rad

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def rel_err(self) -> mpf:
        a = abs(self.mid)
        return self.rad / a if a else mpmath.inf

    def rounded(self, bits: int) -> BigReal:
        """Round the midpoint to ``bits`` and inflate the radius accordingly."""
        with mpmath.workprec(bits):
            m = +self.mid
        return BigReal._raw(m, self.rad + abs(m - self.mid) + abs(m) * mpmath.ldexp(1, -bits))

    def __float__(self):
        return float(self.mid)

    def __complex__(self):
        return complex(self.mid)

    def __repr__(self):
        return f"BigReal({mpmath.nstr(self.mid, 20)} +/- {mpmath.nstr(self.rad, 3)})"

    def to_decimal(self, digits: int | None = None) -> str:
        if digits is None:
            digits = max(1, int(mpmath.mp.prec * 0.30103))
        return mpmath.nstr(self.mid, digits, strip_zeros=False)

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self):
        # negation is exact, so do not round to the ambient precision
        if self.is_complex:
            re, im = self.mid._mpc_
            return BigReal._raw(mpmath.mp.make_mpc((mpf_neg(re), mpf_neg(im))), self.rad)
        if isinstance(self.mid, mpf):
            return BigReal._raw(mpmath.mp.make_mpf(mpf_neg(self.mid._mpf_)), self.rad)
        return BigReal._raw(-self.mid, self.rad)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigReal._raw(abs(self.mid), self.rad + abs(self.mid) * _eps())

    def __add__(self, other):
        o = other if isinstance(other, BigReal) else BigReal(other)
        m = self.mid + o.mid
        return BigReal._raw(m, self.rad + o.rad + abs(m) * _eps())

    __radd__ = __add__

    def __sub__(self, other):
        o = other if isinstance(other, BigReal) else BigReal(other)
        m = self.mid - o.mid
        return BigReal._raw(m, self.rad + o.rad + abs(m) * _eps())

    def __rsub__(self, other):
        return BigReal.coerce(other) - self

    def __mul__(self, other):
        o = other if isinstance(other, BigReal) else BigReal(other)
        m = self.mid * o.mid
        r = abs(self.mid) * o.rad + abs(o.mid) * self.rad + self.rad * o.rad
        return BigReal._raw(m, r + abs(m) * _eps())

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = other if isinstance(other, BigReal) else BigReal(other)
        bm = abs(o.mid)
        if bm <= o.rad:
            raise ZeroDivisionError("division by a ball containing zero")
        m = self.mid / o.mid
        r = (abs(self.mid) * o.rad + bm * self.rad) / (bm * (bm - o.rad))
        return BigReal._raw(m, r + abs(m) * _eps())

    def __rtruediv__(self, other):
        return BigReal.coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, Integral):
            return exp(log(self) * n)
        n = int(n)
        if n < 0:
            return 1 / (self ** (-n))
        result = BigReal._raw(mpf(1), mpf(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        # identity of representation, not mathematical equality
        if not isinstance(other, BigReal):
            return NotImplemented
        return self.mid == other.mid and self.rad == other.rad

    __hash__ = None


def _func(fm, mid, rad_prop):
    return BigReal._raw(fm, rad_prop + abs(fm) * _eps() * _FUNC_ULPS)


def exp(x) -> BigReal:
    x = BigReal.coerce(x)
    fm = mpmath.exp(x.mid)
    prop = abs(fm) * mpmath.expm1(x.rad) if x.rad else mpf(0)
    return _func(fm, x.mid, prop)


def log(x) -> BigReal:
    x = BigReal.coerce(x)
    lo = x.mig()
    if lo == 0:
        raise ValueError("log of a ball containing zero")
    if not x.is_complex and x.mid < 0:
        raise ValueError("log of a negative real ball")
    fm = mpmath.log(x.mid)
    prop = -mpmath.log1p(-x.rad / abs(x.mid)) if x.rad else mpf(0)
    return _func(fm, x.mid, prop)


def sqrt(x) -> BigReal:
    x = BigReal.coerce(x)
    if not x.is_complex and x.mid - x.rad < 0:
        if x.mid < 0:
            raise ValueError("sqrt of a negative real ball")
        # ball straddles 0: enclose [0, sqrt(mid+rad)]
        hi = mpmath.sqrt(x.mid + x.rad)
        return BigReal._raw(hi / 2, hi / 2 * (1 + _eps()))
    fm = mpmath.sqrt(x.mid)
    lo = x.mig()
    prop = x.rad / (mpmath.sqrt(lo) + abs(fm)) if x.rad else mpf(0)
    return _func(fm, x.mid, prop)


def sin(x) -> BigReal:
    x = BigReal.coerce(x)
    fm = mpmath.sin(x.mid)
    # |sin'| <= cosh(|Im|+rad)
    prop = x.rad * mpmath.cosh(abs(mpmath.im(x.mid)) + x.rad) if x.rad else mpf(0)
    return _func(fm, x.mid, prop)


def cos(x) -> BigReal:
    x = BigReal.coerce(x)
    fm = mpmath.cos(x.mid)
    prop = x.rad * mpmath.cosh(abs(mpmath.im(x.mid)) + x.rad) if x.rad else mpf(0)
    return _func(fm, x.mid, prop)


def pi() -> BigReal:
    return BigReal._raw(+mpmath.pi, mpmath.pi * _eps())


def from_fraction(q: Fraction) -> BigReal:
    return BigReal(q)


def hull(values) -> BigReal:
    """Smallest midpoint-centred ball containing every ball in ``values``."""
    values = [BigReal.coerce(v) for v in values]
    lo = min(v.mid - v.rad for v in values)
    hi = max(v.mid + v.rad for v in values)
    return BigReal._raw((lo + hi) / 2, (hi - lo) / 2 * (1 + _eps()))
