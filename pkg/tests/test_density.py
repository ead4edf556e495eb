from fractions import Fraction

import mpmath
import pytest

from ginoe_moments.density import (
    generating_function_series,
    normalization,
    ode_residual_density,
    rho_complex,
    rho_real,
    rho_real_derivatives,
    rho_via_generating_function,
)
from ginoe_moments.errors import DomainError
from ginoe_moments.moments import m0_exact, moment_complex_eigs
from ginoe_moments.numerics import PrecisionContext
from ginoe_moments.numerics.quadrature import integrate_gl

CTX = PrecisionContext(128)


def test_rho_two_at_zero():
    with mpmath.workprec(256):
        assert rho_real(2, 0, CTX).overlaps(1 / mpmath.sqrt(2 * mpmath.pi))


@pytest.mark.parametrize("N", [2, 3, 7])
def test_rho_even(N):
    a, b = rho_real(N, Fraction(13, 10), CTX), rho_real(N, Fraction(-13, 10), CTX)
    assert a.overlaps(b)


def test_rho_rejects_small_N():
    with pytest.raises(DomainError):
        rho_real(1, 0, CTX)


def test_normalization_is_m0():
    for N in (2, 4, 7, 12):
        with mpmath.workprec(256):
            assert normalization(N, CTX).overlaps(m0_exact(N).to_ball(256)), N


def test_rho_nonnegative_on_log_grid():
    for N in range(2, 21):
        top = mpmath.sqrt(2 * N) + 10
        xs = [Fraction(0)] + [Fraction(int(mpmath.mpf(2) ** (k / 2) * 1000), 1000)
                              for k in range(-8, 2 * int(mpmath.log(top, 2)) + 1)]
        for x in xs:
            v = rho_real(N, x, PrecisionContext(64))
            assert v.mid >= -v.rad, (N, x)


def test_rho_complex_symmetries():
    assert rho_complex(4, Fraction(1, 2), 0, CTX).contains(0)
    a = rho_complex(4, Fraction(1, 2), Fraction(3, 4), CTX)
    b = rho_complex(4, Fraction(1, 2), Fraction(-3, 4), CTX)
    assert a.overlaps(b)


@pytest.mark.parametrize("N,x,y", [(4, Fraction(1, 2), Fraction(3, 4)), (7, Fraction(-5, 4), Fraction(2))])
def test_rho_complex_against_mpmath_formula(N, x, y):
    # upper incomplete gamma times y erfc(sqrt2 y) e^{2y^2}, built from mpmath primitives
    v = rho_complex(N, x, y, CTX)
    with mpmath.workprec(200):
        xm, ym = mpmath.mpf(x.numerator) / x.denominator, mpmath.mpf(y.numerator) / y.denominator
        s2y = mpmath.sqrt(2) * ym
        ref = (mpmath.sqrt(2 / mpmath.pi) / mpmath.factorial(N - 2)
               * mpmath.gammainc(N - 1, xm * xm + ym * ym) * ym * mpmath.erfc(s2y) * mpmath.exp(s2y * s2y))
        assert abs(v.mid - ref) <= v.rad + abs(ref) * mpmath.mpf(2) ** -120


def test_derivative_zero_at_origin():
    assert rho_real_derivatives(5, 0, CTX).derivs[0].contains_zero()


def test_derivative_matches_finite_difference():
    x, h = Fraction(4, 5), mpmath.mpf(2) ** -40
    d = rho_real_derivatives(5, x, CTX).derivs[0]
    with mpmath.workprec(256):
        xm = mpmath.mpf(4) / 5
        fd = (rho_real(5, xm + h, PrecisionContext(200)).mid - rho_real(5, xm - h, PrecisionContext(200)).mid) / (2 * h)
        assert abs(fd - d.mid) <= abs(d.mid) * mpmath.mpf(2) ** -75


def test_ode_residual_at_zero():
    assert ode_residual_density(5, 0, CTX).contains(0)


@pytest.mark.parametrize("N,x", [(5, Fraction(13, 10)), (10, Fraction(3))])
def test_ode_residual_vanishes(N, x):
    r = ode_residual_density(N, x, PrecisionContext(192))
    assert r.contains_zero()
    assert r.rad < mpmath.mpf(2) ** -150 * 100


def test_generating_function_oracle():
    with mpmath.workprec(256):
        a = rho_via_generating_function(3, Fraction(1, 2), CTX)
        b = rho_real(3, Fraction(1, 2), CTX)
        assert abs(a.mid - b.mid) < 1e-25
        assert rho_via_generating_function(2, 0, CTX).overlaps(1 / mpmath.sqrt(2 * mpmath.pi))


def test_generating_function_has_no_constant_term():
    s = generating_function_series(1, 4)
    assert s[0].contains_zero()


def test_integrator_on_gaussian():
    with mpmath.workprec(150):
        q = integrate_gl(lambda t: mpmath.exp(-t * t / 2), mpmath.mpf(-12), mpmath.mpf(12),
                         mpmath.mpf(2) ** -120)
        assert abs(q.value - mpmath.sqrt(2 * mpmath.pi)) < mpmath.mpf(2) ** -100
