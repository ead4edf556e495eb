from fractions import Fraction

import mpmath
import pytest

from ginoe_moments.errors import DomainError
from ginoe_moments.moments import m0_exact, moment_real
from ginoe_moments.numerics import PrecisionContext
from ginoe_moments.transforms import (
    mgf_ode_residual,
    mgf_value,
    stieltjes_ode_residual,
    stieltjes_value,
)

CTX = PrecisionContext(128)


def test_mgf_at_zero_is_m0():
    with mpmath.workprec(256):
        assert mgf_value(5, 0, 0, CTX).value.overlaps(m0_exact(5).to_ball(256))


def test_mgf_even():
    a = mgf_value(5, Fraction(7, 10), 0, CTX).value
    b = mgf_value(5, Fraction(-7, 10), 0, CTX).value
    assert a.overlaps(b)


def test_mgf_second_derivative_is_m2():
    v = mgf_value(6, 0, 2, CTX)
    assert v.derivs[1].overlaps(moment_real(6, 1, CTX).value)


def test_mgf_hyp_and_recurrence_moments_agree():
    a = mgf_value(4, Fraction(3, 2), 1, CTX)
    b = mgf_value(4, Fraction(3, 2), 1, CTX, moments="recurrence")
    assert a.value.overlaps(b.value) and a.derivs[0].overlaps(b.derivs[0])


def test_mgf_residual_zero_at_origin():
    assert mgf_ode_residual(4, 0, CTX).contains(0)


@pytest.mark.parametrize("N,t,bits", [(6, Fraction(7, 10), 192), (3, Fraction(5, 2), 128)])
def test_mgf_residual(N, t, bits):
    assert mgf_ode_residual(N, t, PrecisionContext(bits)).contains_zero()


def test_stieltjes_imaginary_axis_is_imaginary():
    w = stieltjes_value(4, mpmath.mpc(0, 2), 0, CTX).value
    assert abs(mpmath.re(w.mid)) <= w.rad


def test_stieltjes_large_t():
    t = mpmath.mpc(0, 10**4)
    w = stieltjes_value(4, t, 0, CTX).value
    m0 = m0_exact(4).to_mpf(64)
    m2 = moment_real(4, 1, CTX).value.mid
    assert abs(t * w.mid - m0) <= m2 / abs(t)


def test_stieltjes_conjugate_symmetry():
    a = stieltjes_value(4, mpmath.mpc(2, 1), 0, CTX).value
    b = stieltjes_value(4, mpmath.mpc(2, -1), 0, CTX).value
    assert a.overlaps(b.conjugate())


def test_stieltjes_against_direct_quadrature():
    from ginoe_moments.density import rho_real

    t = mpmath.mpc(1, 1)
    w = stieltjes_value(3, t, 0, CTX).value
    with mpmath.workprec(80):
        ref = mpmath.quad(lambda x: rho_real(3, x, PrecisionContext(64)).mid / (t - x),
                          [-mpmath.inf, -3, -1, 0, 1, 3, mpmath.inf])
    assert abs(w.mid - ref) < 1e-18


def test_stieltjes_rejects_real_t():
    with pytest.raises(DomainError):
        stieltjes_value(3, 2, 0, CTX)


@pytest.mark.parametrize("N,t", [(5, mpmath.mpc(0, 2)), (3, mpmath.mpc(1, 1))])
def test_stieltjes_residual(N, t):
    assert stieltjes_ode_residual(N, t, CTX).contains_zero()


def test_residual_bound_shrinks_with_precision():
    lo = mgf_ode_residual(5, Fraction(6, 5), PrecisionContext(96))
    hi = mgf_ode_residual(5, Fraction(6, 5), PrecisionContext(192))
    assert hi.contains_zero() and hi.rad <= lo.rad * mpmath.mpf(2) ** -64
    lo = stieltjes_ode_residual(4, mpmath.mpc(1, 2), PrecisionContext(48))
    hi = stieltjes_ode_residual(4, mpmath.mpc(1, 2), PrecisionContext(96))
    assert hi.contains_zero() and hi.rad <= lo.rad * mpmath.mpf(2) ** -24


def test_mgf_truncation_tail_is_honest():
    # the series is summed until the tail bound is below working precision;
    # a tighter target must land inside the looser enclosure
    lo = mgf_value(7, Fraction(9, 4), 0, PrecisionContext(64)).value
    hi = mgf_value(7, Fraction(9, 4), 0, PrecisionContext(160)).value
    assert lo.overlaps(hi) and hi.rad < lo.rad
