"""Large-N expansion of the even real moments from the MGF levels.

Since u~^(2p)(0) = N^(-p-1/2) M_{2p},

    N^-p M_{2p} ~ sqrt(2N/pi) sum_l b_{l,p} N^-l + sum_l c_{l,p} N^-l

with b_{l,p} = (2p-th derivative at 0 of u~_(l)) / sqrt(2/pi) and
c_{l,p} = 2p-th derivative at 0 of u~_(l+1/2). The c-sum stops at l = p-1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError, InternalInconsistencyError
from ..numerics import ball
from ..numerics.ball import BigReal
from ..numerics.context import DEFAULT_CONTEXT, PrecisionContext
from .sinhcosh import MGFLevels, mgf_expansion_levels


@dataclass(frozen=True)
class AsymptoticSeries:
    """N^-p M_{2p} ~ sqrt(2N/pi) sum_l half_power_coeffs[l] N^-l
    + sum_l int_power_coeffs[l] N^-l."""

    p: int
    half_power_coeffs: tuple
    int_power_coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.half_power_coeffs)

    def tail(self) -> tuple:
        """c_{1,p}, ..., c_{p-1,p}: the terminating integer-power part past 1/2."""
        return self.int_power_coeffs[1:]

    def evaluate(self, N, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
        """M_{2p} approximated at N (the N^p factor included)."""
        with ctx.working():
            n = BigReal.coerce(N)
            inv = 1 / n
            half = BigReal(0)
            w = BigReal(1)
            for c in self.half_power_coeffs:
                half = half + w * c
                w = w * inv
            whole = BigReal(0)
            w = BigReal(1)
            for c in self.int_power_coeffs:
                whole = whole + w * c
                w = w * inv
            v = ball.sqrt(2 * n / ball.pi()) * half + whole
            return (v * n ** self.p).rounded(ctx.target_bits)


def moment_asymptotic(N, p: int, m: int, levels: MGFLevels | None = None,
                      ctx: PrecisionContext = DEFAULT_CONTEXT):
    """The expansion of N^-p M_{2p} through N^(1/2-(m-1)) and its value at N.

    Returns (AsymptoticSeries, BigReal).
    """
    if p < 0 or int(p) != p:
        raise DomainError("p must be a nonnegative integer")
    if m < 1:
        raise DomainError("m must be >= 1")
    p = int(p)
    need = max(m - 1, p)
    if levels is None:
        levels = mgf_expansion_levels(need)
    elif levels.k_max < need:
        raise DomainError(f"levels computed to {levels.k_max}, need {need}")
    b = tuple(levels.integer[l].derivative_at_zero(2 * p) for l in range(m))
    c = [levels.half[l].derivative_at_zero(2 * p) for l in range(levels.k_max + 1)]
    for l in range(max(p, 1), len(c)):
        if c[l] != 0:
            raise InternalInconsistencyError(
                f"c_{{{l},{p}}} = {c[l]} should vanish for l >= p")
    series = AsymptoticSeries(p, b, tuple(Fraction(x) for x in c[:max(p, 1)]))
    return series, series.evaluate(N, ctx)
