"""Sparse Laurent polynomials in one variable with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _q(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class LaurentPoly:
    """Finite sum of c_k t^k, k any integer. Immutable; zero terms are dropped."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for k, v in items:
                v = _q(v)
                if v:
                    c[int(k)] = v
        self._c = c

    @classmethod
    def monomial(cls, k: int, c=1) -> LaurentPoly:
        return cls({k: c})

    @classmethod
    def const(cls, c) -> LaurentPoly:
        return cls({0: c})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __getitem__(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -(10**9)

    @property
    def low_degree(self) -> int:
        return min(self._c) if self._c else 10**9

    def is_even(self) -> bool:
        return all(k % 2 == 0 for k in self._c)

    def is_odd(self) -> bool:
        return all(k % 2 for k in self._c)

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPoly) else LaurentPoly.const(-_q(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            c: dict = {}
            for i, a in self._c.items():
                for j, b in other._c.items():
                    c[i + j] = c.get(i + j, 0) + a * b
            return LaurentPoly(c)
        if isinstance(other, Rational):
            o = _q(other)
            return LaurentPoly({k: v * o for k, v in self._c.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            o = _q(other)
            return LaurentPoly({k: v / o for k, v in self._c.items()})
        return NotImplemented

    def __pow__(self, n: int):
        out = LaurentPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, m: int) -> LaurentPoly:
        """Multiply by t^m."""
        return LaurentPoly({k + m: v for k, v in self._c.items()})

    def derivative(self) -> LaurentPoly:
        return LaurentPoly({k - 1: k * v for k, v in self._c.items() if k})

    def eval(self, t):
        """Evaluate at t (Fraction, int, mpf, BigReal ...), Horner-free."""
        total = 0
        for k in sorted(self._c):
            total = total + self._c[k] * (t**k)
        return total

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, Rational):
            return self._c == ({0: _q(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            v = self._c[k]
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            coef = str(v)
            if mono and v == 1:
                coef = ""
            elif mono and v == -1:
                coef = "-"
            parts.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}" or "1")
        return " + ".join(parts).replace("+ -", "- ")

    def to_list(self) -> list:
        """Dense coefficient list c_0..c_deg (requires no negative powers)."""
        if not self._c:
            return []
        if self.low_degree < 0:
            raise ValueError("negative powers present")
        return [self[k] for k in range(self.degree + 1)]


T = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)
