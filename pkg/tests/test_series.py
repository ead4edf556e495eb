import random
from fractions import Fraction

from ginoe_moments.series import (
    PowerSeries,
    ps_div,
    ps_exp,
    ps_expm1_over_t,
    ps_log,
    ps_mul,
    ps_pow,
)

ORDER = 12


def _rand_series(rng, order=ORDER):
    return PowerSeries([Fraction(1)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                                        for _ in range(order)], order)


def test_mul_identity_and_div_self():
    s = _rand_series(random.Random(1))
    one = PowerSeries.constant(Fraction(1), ORDER)
    assert ps_mul(s, one) == s
    assert ps_div(s, s) == one


def test_difference_of_squares():
    t = PowerSeries.variable(4)
    one = PowerSeries.constant(Fraction(1), 4)
    assert ps_mul(one + t, one - t) == PowerSeries([1, 0, -1, 0, 0], 4)


def test_exp_log():
    t = PowerSeries.variable(ORDER)
    assert ps_exp(PowerSeries.constant(Fraction(0), ORDER)) == PowerSeries.constant(Fraction(1), ORDER)
    assert ps_log(ps_exp(t)) == t
    e = ps_exp(t)
    f = 1
    for k in range(ORDER + 1):
        assert e[k] == Fraction(1, f)
        f *= k + 1


def test_pow_trivial_exponents():
    s = _rand_series(random.Random(2))
    assert ps_pow(s, 0) == PowerSeries.constant(Fraction(1), ORDER)
    assert ps_pow(s, 1) == s


def test_pow_of_expm1_over_t():
    p = ps_pow(ps_expm1_over_t(6), Fraction(-3, 2))
    assert [p[0], p[1], p[2]] == [1, Fraction(-3, 4), Fraction(7, 32)]


def test_expm1_over_t_coefficients():
    s = ps_expm1_over_t(5)
    assert s[0] == 1 and s[1] == Fraction(1, 2) and s[3] == Fraction(1, 24)


def test_pow_is_additive_in_exponent():
    rng = random.Random(3)
    for _ in range(10):
        s = _rand_series(rng, 8)
        r = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        q = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        assert ps_pow(s, r + q) == ps_mul(ps_pow(s, r), ps_pow(s, q))


def test_higher_order_reproduces_lower_order():
    rng = random.Random(4)
    s = _rand_series(rng, 20)
    low = ps_pow(s.truncate(8), Fraction(5, 3))
    high = ps_pow(s, Fraction(5, 3))
    assert [low[k] for k in range(9)] == [high[k] for k in range(9)]
