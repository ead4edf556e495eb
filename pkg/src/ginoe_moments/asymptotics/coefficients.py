"""Exact large-N coefficients of M_0 and M_2.

Two independent routes produce the same rationals:

* generator brackets: a_l = -(Gamma(l-1/2)/sqrt(pi)) [t^l] g(t) with
  g = ((e^t-1)/t)^(-3/2) e^(2t)/(e^t+1), and
  b_l = -(Gamma(l-3/2)/(2 sqrt(pi))) [t^l] h(t) with
  h = ((e^t-1)/t)^(-5/2) e^(2t)(e^t-3)/(e^t+1)^2;
* the large-parameter expansion of 2F1(a, b; c+lambda; z), whose
  coefficients q_s(z) come from ((e^t-1)/t)^(b-1) e^(t(1-c)) (1-z+z e^(-t))^(-a).

Derivatives at 0 of a series are l! times its coefficients, so the l! in the
bracket formulas cancels against the Taylor coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import DomainError
from ..numerics.special import gamma_half_integer_over_sqrt_pi, pochhammer_exact
from ..series import (
    PowerSeries,
    ps_div,
    ps_exp_linear,
    ps_expm1_over_t,
    ps_mul,
    ps_pow,
)


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class LargeParameterExpansion:
    """2F1(a, b; c+lam; z) ~ Gamma(c+lam)/Gamma(c-b+lam) sum_s q_s (b)_s lam^(-s-b)."""

    a: Fraction
    b: Fraction
    c: Fraction
    z: Fraction
    q: tuple

    def coefficient(self, s: int) -> Fraction:
        """q_s (b)_s = q_s Gamma(b+s)/Gamma(b), the weight of lam^(-s-b)."""
        return self.q[s] * pochhammer_exact(self.b, s)


def gauss_2f1_large_c_expansion(a, b, c, z, m: int) -> LargeParameterExpansion:
    """q_0(z)..q_m(z) for the large-denominator-parameter expansion of 2F1."""
    if m < 1:
        raise DomainError("m must be >= 1")
    a, b, c, z = _q(a), _q(b), _q(c), _q(z)
    base = ps_pow(ps_expm1_over_t(m), b - 1)
    shift = ps_exp_linear(1 - c, m)
    # 1 - z + z e^{-t}, constant term exactly 1
    inner = ps_exp_linear(-1, m) * z + PowerSeries.constant(1 - z, m)
    gen = ps_mul(ps_mul(base, shift), ps_pow(inner, -a))
    return LargeParameterExpansion(a, b, c, z, gen.coeffs)


def _bracket_g(m: int) -> PowerSeries:
    e = ps_exp_linear(1, m)
    return ps_div(ps_mul(ps_pow(ps_expm1_over_t(m), Fraction(-3, 2)), ps_exp_linear(2, m)),
                  e + 1)


def _bracket_h(m: int) -> PowerSeries:
    e = ps_exp_linear(1, m)
    num = ps_mul(ps_mul(ps_pow(ps_expm1_over_t(m), Fraction(-5, 2)), ps_exp_linear(2, m)),
                 e - 3)
    den = ps_mul(e + 1, e + 1)
    return ps_div(num, den)


@lru_cache(maxsize=32)
def a_coefficients(m: int) -> tuple:
    """(a_1, ..., a_{m-1}) in M_0 ~ sqrt(2N/pi)(1 + sum a_l N^-l) + 1/2."""
    if m < 2:
        raise DomainError("m must be >= 2")
    g = _bracket_g(m)
    return tuple(-gamma_half_integer_over_sqrt_pi(2 * l - 1) * g[l] for l in range(1, m))


@lru_cache(maxsize=32)
def b_coefficients(m: int) -> tuple:
    """(b_1, ..., b_{m-1}) in M_2/N ~ sqrt(2N/pi)(1/3 + sum b_l N^-l) + 1/2."""
    if m < 2:
        raise DomainError("m must be >= 2")
    h = _bracket_h(m)
    return tuple(-gamma_half_integer_over_sqrt_pi(2 * l - 3) * h[l] / 2 for l in range(1, m))


def a_coefficients_via_2f1(m: int) -> tuple:
    """a_l from the (a, b, c, z) = (1, -1/2, 0, 1/2) large-parameter expansion."""
    ex = gauss_2f1_large_c_expansion(1, Fraction(-1, 2), 0, Fraction(1, 2), m)
    return tuple(ex.coefficient(l) for l in range(1, m))


def b_coefficients_via_2f1(m: int) -> tuple:
    """b_l = (beta_l - alpha_{l-1})/3 (-3/2)_l, with alpha from (2, -1/2, 1, 1/2)
    and beta from (1, -3/2, 0, 1/2)."""
    alpha = gauss_2f1_large_c_expansion(2, Fraction(-1, 2), 1, Fraction(1, 2), m).q
    beta = gauss_2f1_large_c_expansion(1, Fraction(-3, 2), 0, Fraction(1, 2), m).q
    return tuple((beta[l] - alpha[l - 1]) / 3 * pochhammer_exact(Fraction(-3, 2), l)
                 for l in range(1, m))


def a_with_leading(m: int) -> tuple:
    """(a_0 = 1, a_1, ..., a_{m-1})."""
    return (Fraction(1),) + a_coefficients(m)


def b_with_leading(m: int) -> tuple:
    """(b_0 = 1/3, b_1, ..., b_{m-1})."""
    return (Fraction(1, 3),) + b_coefficients(m)
