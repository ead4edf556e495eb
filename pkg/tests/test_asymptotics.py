from fractions import Fraction as F

import mpmath
import pytest

from ginoe_moments.asymptotics import (
    D0,
    D1,
    D2,
    Prefactor,
    RationalFunction,
    SinhCoshPoly,
    a_coefficients,
    a_coefficients_via_2f1,
    b_coefficients,
    b_coefficients_via_2f1,
    d0_factorizations,
    density_correction_polynomials,
    gauss_2f1_large_c_expansion,
    mgf_expansion_levels,
    moment_asymptotic,
    stieltjes_expansion_levels,
)
from ginoe_moments.errors import DomainError
from ginoe_moments.moments import exact_moment_sequence, m0_exact
from ginoe_moments.polynomials import LaurentPoly

LEVELS = mgf_expansion_levels(3)


def _int_level(P, Q):
    return SinhCoshPoly(LaurentPoly(P), LaurentPoly(Q))


def _half_level(P, Q):
    return SinhCoshPoly(LaurentPoly(P), LaurentPoly(Q), Prefactor.ONE, True)


def test_a_coefficients():
    assert a_coefficients(5) == (F(-3, 8), F(-3, 128), F(27, 1024), F(499, 32768))


def test_b_coefficients():
    assert b_coefficients(5) == (F(3, 8), F(-43, 384), F(29, 1024), F(1859, 98304))


def test_coefficient_routes_agree_to_higher_order():
    assert a_coefficients(9) == a_coefficients_via_2f1(9)
    assert b_coefficients(9) == b_coefficients_via_2f1(9)


def test_q0_is_one():
    ex = gauss_2f1_large_c_expansion(F(2, 3), F(-1, 2), F(1, 5), F(1, 3), 4)
    assert ex.q[0] == 1


@pytest.mark.parametrize("a,b,c,z", [(1, F(-1, 2), 0, F(1, 2)), (2, F(-3, 2), 1, F(1, 3))])
def test_large_parameter_expansion_against_mpmath(a, b, c, z):
    m = 5
    ex = gauss_2f1_large_c_expansion(a, b, c, z, m)
    with mpmath.workprec(200):
        mp = lambda q: mpmath.mpf(F(q).numerator) / F(q).denominator
        lam = mpmath.mpf(400)
        exact = mpmath.hyp2f1(mp(a), mp(b), mp(c) + lam, mp(z))
        pre = mpmath.gamma(mp(c) + lam) / mpmath.gamma(mp(c) - mp(b) + lam)
        approx = pre * sum(mp(ex.coefficient(s)) * lam ** (-s - mp(b)) for s in range(m))
        # the first omitted term is O(lam^(-m-b)) relative to pre
        assert abs(exact - approx) < abs(pre) * lam ** (-m - mp(b)) * 100


def test_mgf_integer_levels():
    want = {
        1: _int_level({1: F(3, 8)}, {0: F(-3, 8)}),
        2: _int_level({3: F(23, 384), 1: F(9, 384)}, {2: F(-26, 384), 0: F(-9, 384)}),
        3: _int_level({5: F(91, 15360), 3: F(-285, 15360), 1: F(-405, 15360)},
                      {4: F(-5, 15360), 2: F(420, 15360), 0: F(405, 15360)}),
    }
    for k, w in want.items():
        assert LEVELS.level(k) == w, k


def test_mgf_half_levels():
    assert LEVELS.level(F(3, 2)) == _half_level({1: F(-1, 8)}, {2: F(1, 8)})
    assert LEVELS.level(F(5, 2)) == _half_level({3: F(-2, 192), 1: F(3, 192)},
                                                {4: F(3, 192), 2: F(-3, 192)})


def test_d0_annihilates_first_levels():
    assert LEVELS.level(0).apply(D0).is_zero()
    assert LEVELS.level(F(1, 2)).apply(D0).is_zero()


def test_d0_factorizations():
    left, right = d0_factorizations()
    assert left == D0 and right == D0


def test_operator_identity_every_level():
    for chain in ([LEVELS.level(k) for k in range(4)],
                  [LEVELS.level(k + F(1, 2)) for k in range(4)]):
        for k in range(1, len(chain)):
            r = chain[k].apply(D0) + chain[k - 1].apply(D1)
            if k >= 2:
                r = r + chain[k - 2].apply(D2)
            assert r.is_zero(), k


def test_levels_reproduce_coefficients():
    a = (F(1),) + a_coefficients(5)
    b = (F(1, 3),) + b_coefficients(5)
    for k in range(4):
        assert LEVELS.level(k).derivative_at_zero(0) == a[k]
        assert LEVELS.level(k).derivative_at_zero(2) == b[k]


def test_half_level_derivatives():
    lv = LEVELS.level(F(3, 2))
    assert [lv.derivative_at_zero(2 * p) for p in range(2, 6)] == [1, 3, 6, 10]
    lv = LEVELS.level(F(5, 2))
    assert [lv.derivative_at_zero(2 * p) for p in range(3, 6)] == [4, 22, 70]


def test_level_numeric_value():
    v = LEVELS.level(1).evaluate(F(1, 2))
    with mpmath.workprec(200):
        t = mpmath.mpf(1) / 2
        ref = mpmath.sqrt(2 / mpmath.pi) * F(3, 8).numerator / 8 * (t * mpmath.sinh(t) - mpmath.cosh(t))
        assert abs(v.mid - ref) <= v.rad + mpmath.mpf(2) ** -100


def test_tails():
    want = {2: (1,), 3: (3, 4), 4: (6, 22, 24), 5: (10, 70, 200, 192)}
    for p, w in want.items():
        s, _ = moment_asymptotic(100, p, p + 1)
        assert s.tail() == tuple(F(x) for x in w)


def test_p0_and_p1_series_are_a_and_b():
    s0, _ = moment_asymptotic(50, 0, 5)
    s1, _ = moment_asymptotic(50, 1, 5)
    assert s0.half_power_coeffs == (F(1),) + a_coefficients(5)
    assert s1.half_power_coeffs == (F(1, 3),) + b_coefficients(5)
    assert s0.int_power_coeffs[0] == F(1, 2)


def test_p0_value_close_to_exact():
    _, v = moment_asymptotic(200, 0, 5)
    with mpmath.workprec(200):
        exact = m0_exact(200).to_ball(200).mid
        assert abs(v.mid - exact) < mpmath.mpf(200) ** (0.5 - 5)


def test_asymptotic_for_larger_p_against_exact_moments():
    N = 400
    seq = exact_moment_sequence(N, 3)
    errs = []
    for m in (3, 4, 5):
        _, v = moment_asymptotic(N, 3, m)
        with mpmath.workprec(400):
            exact = seq[3].value.to_ball(400).mid
            errs.append(abs(v.mid - exact) / exact)
    assert errs[0] > errs[1] > errs[2]


def test_moment_asymptotic_needs_enough_levels():
    with pytest.raises(DomainError):
        moment_asymptotic(100, 4, 5, levels=mgf_expansion_levels(1))


def test_density_corrections():
    r0 = density_correction_polynomials(0)
    assert r0.slab == F(1, 2) and r0.mass() == 1 and not r0.atoms
    # in absolute terms the slab mass is 2/sqrt(2 pi) = sqrt(2/pi)
    assert r0.prefactor is Prefactor.SQRT_2_OVER_PI
    r_half = density_correction_polynomials(F(1, 2))
    assert r_half.atoms == {(1, 0): F(1, 4), (-1, 0): F(1, 4)} and r_half.slab == 0
    r1 = density_correction_polynomials(1)
    assert r1.polynomials == LEVELS.level(1)
    for k in (0, F(1, 2), 1, F(3, 2), 2, F(5, 2), 3):
        d = density_correction_polynomials(k)
        assert d.mgf() == LEVELS.level(k), k


STIELTJES = stieltjes_expansion_levels(3)


def test_stieltjes_low_levels():
    w1 = STIELTJES.level(1)
    assert w1.unit is Prefactor.INV_SQRT_2PI and w1.log_coeff == 0
    assert w1.rational_part == RationalFunction(LaurentPoly({3: F(-3, 4), 1: F(9, 4)}), 2, 2)
    w32 = STIELTJES.level(F(3, 2))
    assert w32.unit is Prefactor.ONE
    assert w32.rational_part == RationalFunction(LaurentPoly({1: 1}), 3, 3)
    w0 = STIELTJES.level(0)
    assert w0.log_coeff == 1 and not w0.poles


def test_stieltjes_decay():
    assert STIELTJES.level(1).decay_order() == -1
    assert STIELTJES.level(F(3, 2)).decay_order() <= -3


def test_stieltjes_levels_odd():
    for lv in STIELTJES:
        assert lv.is_odd()


def test_stieltjes_large_t_matches_mgf_derivatives():
    # int r(x)/(t-x) dx = sum_p t^-(2p+1) int x^(2p) r(x) dx, and the moments of
    # r are the even derivatives of the MGF level at 0
    n = 12
    for k in (0, 1, 2, 3):
        e = STIELTJES.level(k).expansion_at_infinity(n)
        mg = LEVELS.level(k)
        for p in range((n - 1) // 2 + 1):
            assert e[2 * p + 1] == 2 * mg.derivative_at_zero(2 * p), (k, p)
    for k in (F(1, 2), F(3, 2), F(5, 2)):
        e = STIELTJES.level(k).expansion_at_infinity(n)
        mg = LEVELS.level(k)
        for p in range((n - 1) // 2 + 1):
            assert e[2 * p + 1] == mg.derivative_at_zero(2 * p), (k, p)
