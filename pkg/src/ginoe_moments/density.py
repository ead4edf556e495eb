"""Real and complex eigenvalue densities of the real Ginibre ensemble.

The real density is

    rho_N(x) = C_N (Gamma(N-1, x^2) + 2^((N-3)/2) e^(-x^2/2) |x|^(N-1) gamma((N-1)/2, x^2/2)),
    C_N = 1 / (sqrt(2 pi) (N-2)!),

and its derivatives are expressed through the two building blocks

    a(x) = x^(2N-3) e^(-x^2),
    b(x) = 2^((N-3)/2) e^(-x^2/2) x^(N-2) gamma((N-1)/2, x^2/2),

which close under differentiation with Laurent-polynomial coefficients:
a' = ((2N-3)/x - 2x) a and b' = ((N-2)/x - x) b + a/x. Then rho' = C_N f with
f = -a + (N-1-x^2) b, and every higher derivative is C_N (alpha a + beta b).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mpf

from .errors import DomainError, TruncationOverflowError
from .numerics import ball
from .numerics.ball import BigReal
from .numerics.context import DEFAULT_CONTEXT, PrecisionContext
from .numerics.quadrature import integrate_gl_multi, integrate_tanh_sinh
from .numerics.special import _erf, _erfc, _lower_gamma, _upper_gamma, _x_derivative_bound
from .polynomials import LaurentPoly
from .series import PowerSeries, ps_exp, ps_integrate, ps_mul

GF_N_MAX = 30


@dataclass(frozen=True)
class DensityPoint:
    N: int
    x: BigReal
    rho: BigReal
    derivs: tuple | None = None


@dataclass(frozen=True)
class ComplexDensityPoint:
    N: int
    x: BigReal
    y: BigReal
    rho: BigReal


def _check_N(N):
    if not isinstance(N, int) or N < 2:
        raise DomainError("the density formula needs an integer N >= 2")


def _norm_const(N: int) -> BigReal:
    # 1 / (sqrt(2 pi) (N-2)!)
    return 1 / (ball.sqrt(2 * ball.pi()) * math.factorial(N - 2))


def _pow2_half(k: int) -> BigReal:
    """2^(k/2) for integer k."""
    if k % 2 == 0:
        return BigReal(2) ** (k // 2)
    return ball.sqrt(BigReal(2)) ** k


def _incgamma_ball(kind, a, y: BigReal) -> BigReal:
    fn = _upper_gamma if kind == "upper" else _lower_gamma
    am = mpf(a)
    res = fn(am, y.mid)
    if y.rad:
        res = BigReal._raw(res.mid, res.rad + y.rad * _x_derivative_bound(am, y))
    return res


def _blocks(N: int, ax: BigReal):
    """(Gamma(N-1, x^2), a(|x|), b(|x|)) at the current precision."""
    y = ax * ax
    g_up = _incgamma_ball("upper", N - 1, y)
    e1 = ball.exp(-y)
    a = ax ** (2 * N - 3) * e1
    if ax.mid == 0 and ax.rad == 0:
        b = BigReal(0)
    else:
        e2 = ball.exp(-y / 2)
        low = _incgamma_ball("lower", mpf(N - 1) / 2, y / 2)
        b = _pow2_half(N - 3) * e2 * ax ** (N - 2) * low
    return g_up, a, b


def _abs_ball(x: BigReal) -> BigReal:
    if x.mid >= 0:
        return x
    return -x


def _rho_real(N: int, x) -> BigReal:
    ax = _abs_ball(BigReal.coerce(x))
    g_up, _, b = _blocks(N, ax)
    return _norm_const(N) * (g_up + ax * b)


def rho_real(N: int, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """Mean density of real eigenvalues of an N x N GinOE matrix at x."""
    _check_N(N)
    with ctx.working():
        xb = BigReal.coerce(x)
        if xb.is_complex:
            raise DomainError("x must be real")
        return _rho_real(N, xb).rounded(ctx.target_bits)


def rho_complex(N: int, x, y, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """Mean density of complex eigenvalues at x + iy (with respect to dx dy)."""
    _check_N(N)
    with ctx.working():
        xb, yb = BigReal.coerce(x), BigReal.coerce(y)
        ay = _abs_ball(yb)
        if ay.mid == 0 and ay.rad == 0:
            return BigReal(0)
        s2 = ball.sqrt(BigReal(2))
        r2 = xb * xb + ay * ay
        g = _incgamma_ball("upper", N - 1, r2) / math.factorial(N - 2)
        v = ball.sqrt(2 / ball.pi()) * ay * _erfc(s2 * ay) * ball.exp(2 * ay * ay) * g
        return v.rounded(ctx.target_bits)


# -- derivatives --------------------------------------------------------------

@lru_cache(maxsize=64)
def derivative_coefficients(N: int, order: int = 3) -> tuple:
    """Laurent coefficients (alpha_k, beta_k), k = 0..order-1, with
    f^(k) = alpha_k a + beta_k b and rho^(k+1) = C_N f^(k) for x > 0."""
    da = LaurentPoly({-1: 2 * N - 3, 1: -2})
    db = LaurentPoly({-1: N - 2, 1: -1})
    inv_x = LaurentPoly({-1: 1})
    alpha = LaurentPoly.const(-1)
    beta = LaurentPoly({0: N - 1, 2: -1})
    out = [(alpha, beta)]
    for _ in range(order - 1):
        alpha, beta = (alpha.derivative() + alpha * da + beta * inv_x,
                       beta.derivative() + beta * db)
        out.append((alpha, beta))
    return tuple(out)


def _rho_real_derivatives(N: int, x: BigReal):
    xb = BigReal.coerce(x)
    if xb.mid == 0 and xb.rad == 0:
        # f vanishes to order x^(2N-1) at 0, so rho', rho'', rho''' are all 0
        z = BigReal(0)
        return _rho_real(N, xb), z, z, z
    if xb.mid - xb.rad <= 0 <= xb.mid + xb.rad:
        raise DomainError("derivative evaluation needs a ball that excludes 0")
    sign = 1 if xb.mid > 0 else -1
    ax = _abs_ball(xb)
    g_up, a, b = _blocks(N, ax)
    c = _norm_const(N)
    rho = c * (g_up + ax * b)
    ds = []
    for k, (al, be) in enumerate(derivative_coefficients(N, 3)):
        val = c * (al.eval(ax) * a + be.eval(ax) * b)
        # rho is even, so the (k+1)-th derivative has parity (-1)^(k+1)
        ds.append(val if (sign > 0 or k % 2 == 1) else -val)
    return (rho, *ds)


def rho_real_derivatives(N: int, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> DensityPoint:
    """(rho, rho', rho'', rho''') from the closed forms, no finite differences.

    Near x = 0 the combination -a + (N-1-x^2) b cancels to O(x^(2N-1)), so
    the working precision is raised by the bits that cancellation costs.
    """
    _check_N(N)
    xb = BigReal.coerce(x)
    extra = 0
    if xb.mid != 0:
        extra = max(0, int(-2 * N * mpmath.log(abs(xb.mid), 2))) + 8 if abs(xb.mid) < 1 else 8
    with ctx.extended(extra).working():
        xb = BigReal.coerce(x)
        vals = _rho_real_derivatives(N, xb)
        vals = tuple(v.rounded(ctx.target_bits) for v in vals)
    return DensityPoint(N, BigReal.coerce(x), vals[0], vals[1:])


def _ode_residual(N: int, x: BigReal, d1, d2, d3) -> BigReal:
    x2 = x * x
    return (x2 * d3 + x * (3 * x2 - 3 * N + 4) * d2
            + (2 * x2 - 2 * N + 1) * (x2 - N + 2) * d1)


def ode_residual_density(N: int, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """x^2 rho''' + x(3x^2-3N+4) rho'' + (2x^2-2N+1)(x^2-N+2) rho', evaluated
    with independently computed derivatives. Expected to contain 0."""
    _check_N(N)
    pt = rho_real_derivatives(N, x, ctx)
    with ctx.working():
        xb = BigReal.coerce(x)
        r = _ode_residual(N, xb, *pt.derivs)
        return r.rounded(ctx.target_bits)


# -- generating function in N ------------------------------------------------

def generating_function_series(x, order: int) -> PowerSeries:
    """Coefficients of z^0..z^order of F(z, x) = sum_N rho_N(x) z^N, built
    from exp and erf expansions in z at the current precision."""
    xb = _abs_ball(BigReal.coerce(x))
    zero, one = BigReal(0), BigReal(1)
    x2 = xb * xb
    c = xb / ball.sqrt(BigReal(2))
    c2 = c * c
    isq = 1 / ball.sqrt(2 * ball.pi())
    two_c_sqpi = 2 * c / ball.sqrt(ball.pi())

    def poly(cs):
        return PowerSeries([BigReal.coerce(v) for v in cs], order)

    # z e^{-x^2/2} / sqrt(2 pi)
    term1 = poly([zero, isq * ball.exp(-x2 / 2)])
    # z^2/(1-z) e^{-x^2} e^{x^2 z} / sqrt(2 pi)
    geo = poly([one] * (order + 1))
    ex = ps_exp(poly([zero, x2]))
    term2 = ps_mul(geo, ex).shift(2) * (isq * ball.exp(-x2))
    # (|x|/2) z^2 e^{-x^2/2} e^{x^2 z^2 / 2} (erf(c z) + erf(c (1 - z)))
    g1 = ps_integrate(ps_exp(poly([zero, zero, -c2])).truncate(order - 1)) * two_c_sqpi
    g2 = ps_integrate(ps_exp(poly([zero, 2 * c2, -c2])).truncate(order - 1))
    g2 = g2 * (two_c_sqpi * ball.exp(-c2))
    erfs = g1 - g2 + _erf(c)
    gauss = ps_exp(poly([zero, zero, x2 / 2]))
    term3 = ps_mul(gauss, erfs).shift(2) * (xb / 2 * ball.exp(-x2 / 2))
    return term1 + term2 + term3


def rho_via_generating_function(N: int, x, ctx: PrecisionContext = DEFAULT_CONTEXT,
                                n_max: int = GF_N_MAX) -> BigReal:
    """rho_N(x) read off as the z^N coefficient of the generating function."""
    _check_N(N)
    if N > n_max:
        raise TruncationOverflowError(f"N={N} exceeds the series length limit {n_max}")
    # the series mixes terms of size e^{x^2} before they cancel
    xb = BigReal.coerce(x)
    extra = int(float(abs(xb.mid)) ** 2 * 1.45) + 16
    with ctx.extended(extra).working():
        s = generating_function_series(x, N + 2)
        return s[N].rounded(ctx.target_bits)


# -- tail bounds and integration against the density -------------------------

def _power_gauss_tail(j, beta, X) -> mpf:
    """Upper bound for int_X^inf x^j e^{-beta x^2} dx (needs 2 beta X^2 > j-1)."""
    j, beta, X = mpf(j), mpf(beta), mpf(X)
    lead = X ** (j - 1) * mpmath.exp(-beta * X * X) / (2 * beta)
    if j <= 1:
        return lead
    q = (j - 1) / (2 * beta * X * X)
    if q >= 1:
        return mpmath.inf
    return lead / (1 - q)


def density_tail_bound(N: int, X, m=0) -> mpf:
    """Upper bound for int_X^inf x^m rho_N(x) dx.

    Uses gamma(s, y) <= Gamma(s) and Gamma(n, y) <= y^(n-1) e^-y / (1 - (n-1)/y).
    """
    X = mpf(X)
    y = X * X
    if y <= N - 2 + 1:
        return mpmath.inf
    c = 1 / (mpmath.sqrt(2 * mpmath.pi) * mpmath.factorial(N - 2))
    first = _power_gauss_tail(m + 2 * N - 4, 1, X) / (1 - mpf(N - 2) / y)
    k = mpmath.power(2, mpf(N - 3) / 2) * mpmath.gamma(mpf(N - 1) / 2)
    second = k * _power_gauss_tail(m + N - 1, mpf(1) / 2, X)
    return c * (first + second)


def cutoff_for(N: int, m, tol) -> mpf:
    """Smallest integer X >= sqrt(2N) with density_tail_bound(N, X, m) <= tol."""
    X = mpf(math.ceil(math.sqrt(2 * N))) + 1
    while density_tail_bound(N, X, m) > tol:
        X += 1
    return X


def integrate_powers(N: int, exponents, ctx: PrecisionContext = DEFAULT_CONTEXT,
                     rel_tol=None) -> list:
    """2 int_0^inf x^e rho_N(x) dx for each e in ``exponents`` (real, > -1).

    All integrals share one adaptive panel tree on [1, X] so each density
    evaluation is reused; [0, 1] uses Gauss-Legendre when every exponent is
    an integer and tanh-sinh otherwise. Results are balls whose radius adds
    the quadrature estimate, the rounding budget and the analytic tail.
    """
    _check_N(N)
    if any(e <= -1 for e in exponents):
        raise DomainError("integral diverges at 0 for exponents <= -1")
    bits = min(ctx.target_bits, 110) if rel_tol is None else None
    with ctx.working():
        exps = [BigReal(e).mid for e in exponents]
        rtol = mpmath.ldexp(1, -bits) if rel_tol is None else mpf(rel_tol)
        # scale of each integral (crude, only used to set absolute tolerances)
        scales = [max(mpf(1), mpmath.gamma((e + 1) / 2) * mpmath.power(2, e / 2)) for e in exps]
        # the moments are bounded by trace moments ~ (N + e)^(e/2); keep it generous
        scales = [s * mpmath.power(N + abs(e) + 1, e / 2 if e > 0 else 0) / 4 for s, e in zip(scales, exps)]
        tols = [rtol * s / 8 for s in scales]
        X = max(cutoff_for(N, e, t) for e, t in zip(exps, tols))
        tails = [density_tail_bound(N, X, e) for e in exps]

        def rho(x):
            return _rho_real(N, BigReal._raw(x, mpf(0)))

        m = len(exps)

        def f(x):
            # values first, then the integrand's own rounding radii
            r = rho(x)
            pw = [mpmath.power(x, e) for e in exps]
            return [p * r.mid for p in pw] + [p * r.rad for p in pw]

        rad_tols = [mpmath.inf] * m
        if all(mpmath.isint(e) for e in exps):
            parts = integrate_gl_multi(f, 0, X, tols + rad_tols, breakpoints=range(1, int(X)))
        else:
            highs = integrate_gl_multi(f, 1, X, tols + rad_tols, breakpoints=range(2, int(X)))
            parts = []
            for i in range(2 * m):
                lo = integrate_tanh_sinh(lambda x, i=i: f(x)[i], 0, 1,
                                         tols[i] / 2 if i < m else mpmath.inf)
                parts.append(_sum_results(lo, highs[i]))
        out = []
        for i in range(m):
            q, qr = parts[i], parts[m + i]
            v = 2 * q.value
            err = 2 * (q.err + tails[i] + 2 * abs(qr.value))
            out.append(BigReal._raw(v, err).rounded(ctx.target_bits))
        return out


class _Sum:
    __slots__ = ("value", "err", "evaluations")

    def __init__(self, value, err, evaluations):
        self.value, self.err, self.evaluations = value, err, evaluations


def _sum_results(a, b):
    return _Sum(a.value + b.value, a.err + b.err, a.evaluations + b.evaluations)


def normalization(N: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """int rho_N(x) dx, the expected number of real eigenvalues."""
    return integrate_powers(N, [0], ctx)[0]
