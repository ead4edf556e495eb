"""Large-N levels of the rescaled Stieltjes transform W~(t) = W(sqrt(N) t).

Each level solves

    2(t^2-1)^2 W_k' = R_k - (t^2-1)(3t W_{k-1}'' + 5 W_{k-1}')
                          - (t^2 W_{k-2}''' + 4t W_{k-2}'' + 2 W_{k-2}')

so only W' ever enters. Rational functions are kept as
N(t) / ((t-1)^a (t+1)^b); antidifferentiation goes through partial fractions
at t = +-1. Integer levels are in units of 1/sqrt(2 pi), half-integer levels
in units of 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from ..errors import DomainError, InternalInconsistencyError
from ..polynomials import LaurentPoly
from .coefficients import a_with_leading, b_with_leading
from .sinhcosh import Prefactor

ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
T = LaurentPoly.monomial(1)
TM1 = LaurentPoly({1: 1, 0: -1})
TP1 = LaurentPoly({1: 1, 0: 1})


def _poly_divmod(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    q = {}
    r = dict(num.coeffs)
    dd = den.degree
    lead = den[dd]
    while r:
        top = max(r)
        if top < dd:
            break
        c = r[top] / lead
        q[top - dd] = c
        for k, v in den.coeffs.items():
            nk = k + top - dd
            r[nk] = r.get(nk, 0) - c * v
            if r[nk] == 0:
                del r[nk]
    return LaurentPoly(q), LaurentPoly(r)


def _taylor_shift(p: LaurentPoly, x0) -> list:
    """Coefficients of p(x0 + s) in s."""
    deg = p.degree if not p.is_zero() else 0
    out = [Fraction(0)] * (deg + 1)
    for k, c in p.coeffs.items():
        for m in range(k + 1):
            out[m] += c * math.comb(k, m) * Fraction(x0) ** (k - m)
    return out


@dataclass(frozen=True)
class RationalFunction:
    """num / ((t-1)^a (t+1)^b) with an exact polynomial numerator."""

    num: LaurentPoly
    a: int = 0
    b: int = 0

    def _lift(self, a: int, b: int) -> LaurentPoly:
        return self.num * TM1 ** (a - self.a) * TP1 ** (b - self.b)

    def __add__(self, other: RationalFunction) -> RationalFunction:
        a, b = max(self.a, other.a), max(self.b, other.b)
        return RationalFunction(self._lift(a, b) + other._lift(a, b), a, b)

    def __neg__(self):
        return RationalFunction(-self.num, self.a, self.b)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c) -> RationalFunction:
        if isinstance(c, LaurentPoly):
            return RationalFunction(self.num * c, self.a, self.b)
        return RationalFunction(self.num * Fraction(c), self.a, self.b)

    __rmul__ = __mul__

    def divide_by(self, c, a: int = 0, b: int = 0) -> RationalFunction:
        """Divide by c (t-1)^a (t+1)^b."""
        return RationalFunction(self.num * (1 / Fraction(c)), self.a + a, self.b + b)

    def derivative(self) -> RationalFunction:
        # (N/D)' = (N' (t-1)(t+1) - N (a(t+1) + b(t-1))) / ((t-1)^(a+1) (t+1)^(b+1))
        n = self.num.derivative() * TM1 * TP1 - self.num * (TP1 * self.a + TM1 * self.b)
        return RationalFunction(n, self.a + 1, self.b + 1)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.partial_fractions())

    def partial_fractions(self) -> PartialFractions:
        poles = {}
        if self.a:
            den = _taylor_shift(TP1 ** self.b, 1)   # (2+s)^b
            g = _series_div(_taylor_shift(self.num, 1), den, self.a)
            for j in range(1, self.a + 1):
                if g[self.a - j]:
                    poles[(1, j)] = g[self.a - j]
        if self.b:
            den = _taylor_shift(TM1 ** self.a, -1)  # (s-2)^a
            g = _series_div(_taylor_shift(self.num, -1), den, self.b)
            for j in range(1, self.b + 1):
                if g[self.b - j]:
                    poles[(-1, j)] = g[self.b - j]
        pf = PartialFractions(ZERO, poles)
        rem = self.num - pf.without_poly()._lift(self.a, self.b)
        q, r = _poly_divmod(rem, TM1 ** self.a * TP1 ** self.b)
        if not r.is_zero():
            raise InternalInconsistencyError("partial fraction remainder does not vanish")
        return PartialFractions(q, poles)


def _series_div(num: list, den: list, n: int) -> list:
    """First n coefficients of num/den as power series (den[0] != 0)."""
    out = []
    for k in range(n):
        s = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            s -= den[j] * out[k - j]
        out.append(s / den[0])
    return out


@dataclass(frozen=True)
class PartialFractions:
    """poly(t) + sum c / (t - x0)^j, keys (x0, j) with x0 = +-1."""

    poly: LaurentPoly
    poles: dict = field(default_factory=dict)

    def without_poly(self) -> RationalFunction:
        a = max([j for (x0, j) in self.poles if x0 == 1], default=0)
        b = max([j for (x0, j) in self.poles if x0 == -1], default=0)
        num = ZERO
        for (x0, j), c in self.poles.items():
            if x0 == 1:
                num = num + TM1 ** (a - j) * TP1 ** b * c
            else:
                num = num + TM1 ** a * TP1 ** (b - j) * c
        return RationalFunction(num, a, b)

    def to_rational(self) -> RationalFunction:
        r = self.without_poly()
        return r + RationalFunction(self.poly)

    def __hash__(self):
        return hash((self.poly, frozenset(self.poles.items())))


def _log_ratio_derivative() -> RationalFunction:
    # d/dt log((t+1)/(t-1)) = -2/((t-1)(t+1))
    return RationalFunction(LaurentPoly.const(-2), 1, 1)


@dataclass(frozen=True)
class StieltjesLevel:
    """unit * (log_coeff log((t+1)/(t-1)) + sum c/(t - x0)^j)."""

    level: Fraction
    unit: Prefactor
    log_coeff: Fraction
    poles: dict

    @property
    def rational_part(self) -> RationalFunction:
        return PartialFractions(ZERO, self.poles).to_rational()

    def derivative(self) -> RationalFunction:
        return self.rational_part.derivative() + _log_ratio_derivative() * self.log_coeff

    def __str__(self):
        parts = []
        if self.log_coeff:
            parts.append(f"({self.log_coeff})*log((t+1)/(t-1))")
        r = self.rational_part
        if not r.num.is_zero():
            den = " ".join(f"(t{'-' if x0 > 0 else '+'}1)^{j}" for x0, j in ((1, r.a), (-1, r.b)) if j)
            parts.append(f"({r.num})" + (f"/({den})" if den else ""))
        body = " + ".join(parts) or "0"
        return body if self.unit is Prefactor.ONE else f"{self.unit.value}*[{body}]"

    def is_odd(self) -> bool:
        # log((t+1)/(t-1)) is odd; c/(t-1)^j is paired with (-1)^(j+1) c/(t+1)^j
        for (x0, j), c in self.poles.items():
            if self.poles.get((-x0, j), 0) != (-1) ** (j + 1) * c:
                return False
        return True

    def expansion_at_infinity(self, n_max: int) -> list:
        """Coefficients e_n of t^-n, n = 0..n_max."""
        e = [Fraction(0)] * (n_max + 1)
        for n in range(1, n_max + 1, 2):
            e[n] += 2 * self.log_coeff / n
        for (x0, j), c in self.poles.items():
            for m in range(0, n_max - j + 1):
                e[j + m] += c * math.comb(j + m - 1, m) * Fraction(x0) ** m
        return e

    def decay_order(self, n_max: int = 64) -> int:
        """-n for the leading t^-n behaviour at infinity."""
        e = self.expansion_at_infinity(n_max)
        for n, c in enumerate(e):
            if c:
                return -n
        raise InternalInconsistencyError("level vanishes to the tested order")

    def evaluate(self, t) -> mpmath.mpc:
        t = mpmath.mpmathify(t)
        v = self.log_coeff * mpmath.log((t + 1) / (t - 1))
        for (x0, j), c in self.poles.items():
            v += mpmath.mpf(c.numerator) / c.denominator / (t - x0) ** j
        if self.unit is Prefactor.ONE:
            return v
        if self.unit is Prefactor.INV_SQRT_2PI:
            return v / mpmath.sqrt(2 * mpmath.pi)
        return v * mpmath.sqrt(2 / mpmath.pi)


def _apply_d1(wp: RationalFunction) -> RationalFunction:
    """(t^2-1)(3t W'' + 5 W') from W'."""
    inner = wp.derivative() * (T * 3) + wp * 5
    return inner * (TM1 * TP1)


def _apply_d2(wp: RationalFunction) -> RationalFunction:
    """t^2 W''' + 4t W'' + 2 W' from W'."""
    w2 = wp.derivative()
    w3 = w2.derivative()
    return w3 * (T * T) + w2 * (T * 4) + wp * 2


def _apply_d0(wp: RationalFunction) -> RationalFunction:
    return wp * (TM1 * TM1 * TP1 * TP1 * 2)


def stieltjes_rhs(levels_needed: int) -> tuple:
    """(integer-level RHS, half-level RHS) as rational functions in their units."""
    a = a_with_leading(levels_needed + 1)
    b = b_with_leading(levels_needed + 1)
    ints, halves = [], []
    for k in range(levels_needed + 1):
        prev = a[k - 1] if k >= 1 else Fraction(0)
        poly = LaurentPoly({0: 4 * a[k] + prev - 6 * b[k], 2: -2 * a[k]})
        # sqrt(2/pi) = 2 / sqrt(2 pi)
        ints.append(RationalFunction(poly * 2))
        if k == 0:
            halves.append(RationalFunction(LaurentPoly({0: -1, 2: -1})))
        elif k == 1:
            halves.append(RationalFunction(LaurentPoly.const(Fraction(1, 2))))
        else:
            halves.append(RationalFunction(ZERO))
    return ints, halves


def _integrate_level(wp: RationalFunction, level: Fraction, unit: Prefactor) -> StieltjesLevel:
    pf = wp.partial_fractions()
    if not pf.poly.is_zero():
        raise InternalInconsistencyError(f"level {level}: W' has a polynomial part")
    c_minus = pf.poles.get((1, 1), Fraction(0))   # coefficient of log(t-1)
    c_plus = pf.poles.get((-1, 1), Fraction(0))   # coefficient of log(t+1)
    if c_minus != -c_plus:
        raise InternalInconsistencyError(f"level {level}: log terms do not pair up")
    if level >= 1 and c_plus:
        raise InternalInconsistencyError(f"level {level}: non-cancelling log terms")
    poles = {}
    for (x0, j), c in pf.poles.items():
        if j == 1:
            continue
        poles[(x0, j - 1)] = c / (1 - j)
    # zero integration constant: the level must vanish at infinity
    return StieltjesLevel(level, unit, Fraction(c_plus), poles)


def _chain(rhs: list, offset: Fraction, unit: Prefactor) -> list:
    levels, derivs = [], []
    for k, r in enumerate(rhs):
        f = r
        if k >= 1:
            f = f - _apply_d1(derivs[k - 1])
        if k >= 2:
            f = f - _apply_d2(derivs[k - 2])
        wp = f.divide_by(2, 2, 2)
        lev = _integrate_level(wp, k + offset, unit)
        levels.append(lev)
        derivs.append(lev.derivative())
    for k, lev in enumerate(levels):
        lhs = _apply_d0(derivs[k])
        if k >= 1:
            lhs = lhs + _apply_d1(derivs[k - 1])
        if k >= 2:
            lhs = lhs + _apply_d2(derivs[k - 2])
        if lhs != rhs[k]:
            raise InternalInconsistencyError(f"Stieltjes operator identity fails at level {k}")
        if not lev.is_odd():
            raise InternalInconsistencyError(f"Stieltjes level {k + offset} is not odd")
    return levels


@dataclass(frozen=True)
class StieltjesLevels:
    integer: tuple
    half: tuple

    def level(self, k) -> StieltjesLevel:
        q = Fraction(k)
        if q.denominator == 1:
            return self.integer[int(q)]
        if q.denominator == 2:
            return self.half[int(q - Fraction(1, 2))]
        raise DomainError("levels are integers or half-integers")

    def __iter__(self):
        for a, b in zip(self.integer, self.half):
            yield a
            yield b


@lru_cache(maxsize=8)
def stieltjes_expansion_levels(k_max: int) -> StieltjesLevels:
    """W~_(0..k_max) and W~_(1/2..k_max+1/2), each verified against its equation."""
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    ints, halves = stieltjes_rhs(k_max)
    return StieltjesLevels(
        tuple(_chain(ints, Fraction(0), Prefactor.INV_SQRT_2PI)),
        tuple(_chain(halves, Fraction(1, 2), Prefactor.ONE)),
    )
