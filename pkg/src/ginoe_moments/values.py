"""Result carriers shared across modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import mpmath

from .numerics.ball import BigReal


class Method(str, Enum):
    HYPERGEOMETRIC = "hypergeometric"
    RECURRENCE = "recurrence"
    QUADRATURE = "quadrature"
    EXACT_SUM = "exact-sum"
    EXTRAPOLATION = "extrapolation"
    SERIES = "series"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class MomentValue:
    """A value with an absolute error bound and the route that produced it.

    ``value`` is a :class:`BigReal` for floating routes or an exact
    :class:`~ginoe_moments.moments.Sqrt2Rational` on the exact path.
    """

    value: object
    method: Method
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def err(self):
        v = self.value
        if isinstance(v, BigReal):
            return v.rad
        return mpmath.mpf(0)

    def ball(self, prec: int | None = None) -> BigReal:
        v = self.value
        if isinstance(v, BigReal):
            return v
        return v.to_ball(prec)

    def agrees_with(self, other: MomentValue) -> bool:
        return self.ball().overlaps(other.ball())

    def __repr__(self):
        return f"MomentValue({self.value!r}, method={self.method.value})"
