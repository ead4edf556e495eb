import random
from fractions import Fraction

import mpmath
import pytest

from ginoe_moments.errors import PoleError
from ginoe_moments.numerics import (
    BigReal,
    PrecisionContext,
    double_factorial,
    erf_fn,
    gamma_fn,
    lower_incomplete_gamma,
    upper_incomplete_gamma,
)
from ginoe_moments.numerics.hypergeom import HypParams, hyp_pfq
from ginoe_moments.numerics.quadrature import integrate_gl

CTX = PrecisionContext(128)


def _close(ball, exact, bits=120):
    with mpmath.workprec(bits + 64):
        return abs(ball.mid - exact) <= ball.rad + mpmath.ldexp(abs(exact), -bits)


def test_gamma_values():
    assert gamma_fn(1, CTX).contains(1)
    with mpmath.workprec(256):
        assert _close(gamma_fn(Fraction(1, 2), CTX), mpmath.sqrt(mpmath.pi))


def test_gamma_reflection_at_minus_half():
    with mpmath.workprec(256):
        prod = gamma_fn(Fraction(-1, 2), CTX) * gamma_fn(Fraction(3, 2), CTX)
        assert _close(prod, -mpmath.pi)


def test_gamma_pole():
    with pytest.raises(PoleError):
        gamma_fn(-2, CTX)


def test_gamma_complex_matches_mpmath():
    z = mpmath.mpc(0.3, 1.7)
    g = gamma_fn(z, CTX)
    with mpmath.workprec(256):
        assert abs(g.mid - mpmath.gamma(z)) <= g.rad + mpmath.mpf(2) ** -120


@pytest.mark.parametrize("x", [Fraction(1, 10), Fraction(3), Fraction(25, 2)])
def test_upper_gamma_at_one_is_exponential(x):
    with mpmath.workprec(256):
        assert _close(upper_incomplete_gamma(1, x, CTX), mpmath.exp(-mpmath.mpf(x.numerator) / x.denominator))


def test_upper_gamma_at_zero_is_gamma():
    v = upper_incomplete_gamma(Fraction(7, 3), 0, CTX)
    with mpmath.workprec(256):
        assert _close(v, mpmath.gamma(mpmath.mpf(7) / 3))


@pytest.mark.parametrize("x", [Fraction(1, 4), Fraction(2), Fraction(9)])
def test_lower_gamma_half_is_erf(x):
    v = lower_incomplete_gamma(Fraction(1, 2), x, CTX)
    with mpmath.workprec(256):
        xm = mpmath.mpf(x.numerator) / x.denominator
        assert _close(v, mpmath.sqrt(mpmath.pi) * mpmath.erf(mpmath.sqrt(xm)))


def test_incomplete_gammas_sum_to_gamma():
    rng = random.Random(5)
    for _ in range(20):
        a = Fraction(rng.randint(1, 80), 8)
        x = Fraction(rng.randint(0, 400), 16)
        s = upper_incomplete_gamma(a, x, CTX) + lower_incomplete_gamma(a, x, CTX)
        with mpmath.workprec(256):
            g = gamma_fn(a, CTX)
            assert s.overlaps(g), (a, x)


def test_erf_parity_and_zero():
    assert erf_fn(0, CTX).contains(0)
    a, b = erf_fn(Fraction(7, 5), CTX), erf_fn(Fraction(-7, 5), CTX)
    assert (a + b).contains_zero()


def test_erf_one_against_its_integral():
    with mpmath.workprec(200):
        q = integrate_gl(lambda t: mpmath.exp(-t * t), mpmath.mpf(0), mpmath.mpf(1),
                         mpmath.mpf(2) ** -150)
        want = 2 / mpmath.sqrt(mpmath.pi) * q.value
        assert abs(erf_fn(1, CTX).mid - want) < mpmath.mpf(2) ** -120


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(5) == 15
    assert double_factorial(6) == 48


def test_pfq_zero_numerator_parameter():
    v = hyp_pfq(HypParams((0, Fraction(3, 2)), (Fraction(5, 2),), Fraction(1, 2)), CTX)
    assert v.value.contains(1) and v.err < mpmath.mpf(2) ** -120


def test_1f1_equal_parameters_is_exp():
    v = hyp_pfq(HypParams((Fraction(2, 3),), (Fraction(2, 3),), Fraction(3, 4)), CTX)
    with mpmath.workprec(256):
        assert _close(v.value, mpmath.exp(mpmath.mpf(3) / 4))


def test_2f1_against_direct_double_precision_sum():
    v = hyp_pfq(HypParams((1, Fraction(-1, 2)), (3,), Fraction(1, 2)), CTX)
    with mpmath.workprec(2 * 192):
        # independent term summation at doubled precision
        s, term, k = mpmath.mpf(0), mpmath.mpf(1), 0
        while abs(term) > mpmath.mpf(2) ** -400:
            s += term
            term *= (1 + k) * (mpmath.mpf(-1) / 2 + k) / ((3 + k) * (k + 1)) * mpmath.mpf(1) / 2
            k += 1
        assert _close(v.value, s)


def test_pfq_error_bound_is_sound_on_random_parameters():
    rng = random.Random(11)
    for _ in range(12):
        a = [Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(3)]
        b = [Fraction(rng.randint(1, 40), rng.randint(1, 6)) for _ in range(2)]
        v = hyp_pfq(HypParams(a, b, Fraction(1, 2)), CTX)
        with mpmath.workprec(400):
            ref = mpmath.hyp3f2(*[mpmath.mpf(q.numerator) / q.denominator for q in a + b],
                                mpmath.mpf(1) / 2)
            assert abs(v.value.mid - ref) <= v.err + abs(ref) * mpmath.mpf(2) ** -126


def test_pfq_complex_parameters():
    p = mpmath.mpc(0.4, 0.9)
    v = hyp_pfq(HypParams((1, -p), (Fraction(1, 2),), Fraction(1, 2)), CTX)
    with mpmath.workprec(256):
        ref = mpmath.hyp2f1(1, -p, 0.5, 0.5)
        assert abs(v.value.mid - ref) <= v.err + mpmath.mpf(2) ** -120


def test_ball_arithmetic_encloses():
    with mpmath.workprec(64):
        a = BigReal(mpmath.mpf(1) / 3, mpmath.mpf(2) ** -60)
        b = a * a - a / 7
    with mpmath.workprec(200):
        x = mpmath.mpf(1) / 3
        assert b.contains(x * x - x / 7)


def test_deterministic_for_fixed_context():
    a = hyp_pfq(HypParams((1, Fraction(-5, 2), Fraction(5, 2)), (Fraction(1, 2), Fraction(-7, 2)), Fraction(1, 2)), CTX)
    b = hyp_pfq(HypParams((1, Fraction(-5, 2), Fraction(5, 2)), (Fraction(1, 2), Fraction(-7, 2)), Fraction(1, 2)), CTX)
    assert a.value.mid == b.value.mid and a.err == b.err
