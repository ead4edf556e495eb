"""Truncated formal power series.

Coefficients are exact :class:`~fractions.Fraction` values for every
large-N coefficient generator. The same algorithms run unchanged over
:class:`~ginoe_moments.numerics.BigReal` balls, which the density module uses
for its generating-function oracle.

A series of order M carries c_0..c_M; binary operations truncate to the
smaller order so no coefficient is ever claimed beyond what both operands
determine.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational

from .errors import DomainError


def _zero_like(c):
    return c * 0


def _one_like(c):
    return c * 0 + 1


class PowerSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        cs = list(coeffs)
        if not cs:
            raise ValueError("a power series needs at least one coefficient")
        cs = [Fraction(c) if isinstance(c, int) else c for c in cs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            z = _zero_like(cs[0])
            cs = (cs + [z] * (order + 1 - len(cs)))[: order + 1]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"PowerSeries({list(self.coeffs)!r})"

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    @classmethod
    def constant(cls, c, order: int) -> PowerSeries:
        c = Fraction(c) if isinstance(c, (int, Fraction)) else c
        return cls([c], order)

    @classmethod
    def variable(cls, order: int, like=Fraction(0)) -> PowerSeries:
        """The series t (truncated at ``order``)."""
        z = _zero_like(like)
        return cls([z, _one_like(like)], order)

    def truncate(self, order: int) -> PowerSeries:
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: order + 1])

    def _align(self, other):
        if isinstance(other, PowerSeries):
            m = min(self.order, other.order)
            return self.coeffs[: m + 1], other.coeffs[: m + 1]
        return None, None

    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return PowerSeries((self.coeffs[0] + other,) + self.coeffs[1:])
        return PowerSeries(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return ps_mul(self, other)
        return PowerSeries(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return ps_div(self, other)
        return PowerSeries(c / other for c in self.coeffs)

    def scale_variable(self, s) -> PowerSeries:
        """f(s t)."""
        out, p = [], None
        for k, c in enumerate(self.coeffs):
            p = _one_like(c) if k == 0 else p * s
            out.append(c * p)
        return PowerSeries(out)

    def shift(self, m: int) -> PowerSeries:
        """t^m f(t), keeping the order."""
        z = _zero_like(self.coeffs[0])
        return PowerSeries(([z] * m + list(self.coeffs))[: self.order + 1])

    def derivative_at_zero(self, k: int):
        """k-th derivative at 0, i.e. k! c_k."""
        return self.coeffs[k] * factorial(k)


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    m = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = []
    for n in range(m + 1):
        s = ac[0] * bc[n]
        for k in range(1, n + 1):
            s = s + ac[k] * bc[n - k]
        out.append(s)
    return PowerSeries(out)


def _is_zero(c) -> bool:
    if isinstance(c, Rational):
        return c == 0
    contains_zero = getattr(c, "contains_zero", None)
    return contains_zero() if contains_zero else c == 0


def ps_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    if _is_zero(b.coeffs[0]):
        raise DomainError("division by a series with zero constant term")
    m = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    b0 = bc[0]
    out = []
    for n in range(m + 1):
        s = ac[n]
        for k in range(1, n + 1):
            s = s - bc[k] * out[n - k]
        out.append(s / b0)
    return PowerSeries(out)


def ps_derivative(a: PowerSeries) -> PowerSeries:
    """Formal derivative; the order drops by one."""
    if a.order == 0:
        return PowerSeries([_zero_like(a.coeffs[0])])
    return PowerSeries(k * a.coeffs[k] for k in range(1, a.order + 1))


def ps_integrate(a: PowerSeries, constant=None) -> PowerSeries:
    """Antiderivative with the given constant term; the order rises by one."""
    z = _zero_like(a.coeffs[0])
    c0 = z if constant is None else constant
    return PowerSeries([c0] + [a.coeffs[k] / (k + 1) for k in range(a.order + 1)])


def ps_exp(a: PowerSeries) -> PowerSeries:
    """exp(a) for a with zero constant term."""
    if not _is_zero(a.coeffs[0]):
        raise DomainError("ps_exp requires a zero constant term")
    ac = a.coeffs
    out = [_one_like(ac[0])]
    for n in range(1, a.order + 1):
        s = ac[1] * out[n - 1]
        for k in range(2, n + 1):
            s = s + k * ac[k] * out[n - k]
        out.append(s / n)
    return PowerSeries(out)


def _is_one(c) -> bool:
    if isinstance(c, Rational):
        return c == 1
    contains = getattr(c, "contains", None)
    return contains(1) if contains else c == 1


def ps_log(a: PowerSeries) -> PowerSeries:
    """log(a) for a with constant term 1."""
    if not _is_one(a.coeffs[0]):
        raise DomainError("ps_log requires constant term 1")
    if a.order == 0:
        return PowerSeries([_zero_like(a.coeffs[0])])
    q = ps_div(ps_derivative(a), a.truncate(a.order - 1))
    return ps_integrate(q)


def ps_pow(a: PowerSeries, r) -> PowerSeries:
    """a^r for rational r and constant term 1, by the J.C.P. Miller recurrence
    n b_n = sum_{k=1}^n ((r+1)k - n) a_k b_{n-k}."""
    if not _is_one(a.coeffs[0]):
        raise DomainError("ps_pow requires constant term 1")
    r = Fraction(r)
    ac = a.coeffs
    out = [_one_like(ac[0])]
    for n in range(1, a.order + 1):
        s = _zero_like(ac[0])
        for k in range(1, n + 1):
            w = (r + 1) * k - n
            if w:
                s = s + w * ac[k] * out[n - k]
        out.append(s / n)
    return PowerSeries(out)


def ps_expm1_over_t(order: int) -> PowerSeries:
    """(e^t - 1)/t = sum t^k/(k+1)!."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return PowerSeries(Fraction(1, factorial(k + 1)) for k in range(order + 1))


def ps_exp_linear(c, order: int) -> PowerSeries:
    """e^(c t) with exact coefficients c^k/k!."""
    c = Fraction(c)
    return PowerSeries(c**k / factorial(k) for k in range(order + 1))
