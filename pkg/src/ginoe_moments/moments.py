"""Spectral moments of the real Ginibre ensemble.

Conventions: M_{2p,N} is the expected sum of |lambda|^(2p) over the real
eigenvalues (real part ``moment_real``) or of lambda^(2p) over the complex
eigenvalues (``moment_complex_eigs``). M_0 is the mean number of real
eigenvalues.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational

import mpmath
from mpmath import mpc, mpf

from .density import integrate_powers
from .errors import (
    DomainError,
    ExtrapolationUnstableError,
    IndeterminateParametersError,
    InternalInconsistencyError,
)
from .numerics import ball
from .numerics.ball import BigReal
from .numerics.context import DEFAULT_CONTEXT, PrecisionContext
from .numerics.hypergeom import _hyp_pfq
from .numerics.quadrature import integrate_gl
from .numerics.special import _gamma, _rgamma_ratio, double_factorial
from .values import Method, MomentValue


# -- exact arithmetic in Q(sqrt 2) -------------------------------------------

class Sqrt2Rational:
    """a + b sqrt(2) with exact rational a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def _coerce(cls, x) -> Sqrt2Rational:
        if isinstance(x, Sqrt2Rational):
            return x
        if isinstance(x, Rational):
            return cls(x, 0)
        raise TypeError(f"cannot combine Sqrt2Rational with {type(x).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return Sqrt2Rational(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Sqrt2Rational(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return Sqrt2Rational(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> Sqrt2Rational:
        return Sqrt2Rational(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        q = self * o.conjugate()
        return Sqrt2Rational(q.a / n, q.b / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"Sqrt2Rational({self.a}, {self.b})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt(2)"

    def to_ball(self, prec: int | None = None) -> BigReal:
        """Enclosure of the value at ``prec`` bits (default: current precision)."""
        with mpmath.workprec(prec or mpmath.mp.prec):
            v = BigReal(self.a) + BigReal(self.b) * ball.sqrt(BigReal(2))
        return v

    def to_mpf(self, prec: int = 128) -> mpf:
        return self.to_ball(prec + 16).mid


# -- helpers --------------------------------------------------------------------

def _as_param(p):
    """Normalize p to an exact Fraction when possible, else mpf/mpc."""
    if isinstance(p, BigReal):
        if p.rad:
            raise DomainError("p must be given exactly")
        p = p.mid
    if isinstance(p, Rational):
        return Fraction(p)
    if isinstance(p, str):
        return Fraction(p) if "j" not in p else mpc(complex(p))
    if isinstance(p, float):
        return Fraction(p)
    if isinstance(p, complex):
        return Fraction(p.real) if p.imag == 0 else mpc(p)
    if isinstance(p, mpc):
        return Fraction(mpf(p.real)) if p.imag == 0 else p
    if isinstance(p, mpf):
        return Fraction(*_mpf_ratio(p))
    raise TypeError(f"unsupported moment order {p!r}")


def _mpf_ratio(x: mpf):
    man, exp = x.man_exp
    if exp >= 0:
        return (man * 2**exp, 1)
    return (man, 2 ** (-exp))


def _re(p):
    return p if isinstance(p, Fraction) else mpmath.re(p)


def _is_half_integer(p) -> bool:
    return isinstance(p, Fraction) and p.denominator == 2


def _to_ball(p) -> BigReal:
    return BigReal(p) if isinstance(p, Fraction) else BigReal._raw(p, mpf(0))


def _check_real_domain(N, p):
    if not isinstance(N, Integral) or N < 1:
        raise DomainError("N must be a positive integer")
    if _re(p) <= -0.5:
        raise DomainError("the real moment formula needs Re(p) > -1/2")


def _pow2(p) -> BigReal:
    if isinstance(p, Fraction) and p.denominator == 1:
        e = int(p)
        return BigReal(2) ** e
    return ball.exp(_to_ball(p) * ball.log(BigReal(2)))


def _hyp_term(N: int, p) -> BigReal:
    """(1/sqrt(2 pi)) (2/(2p+1)) Gamma(N+p-1/2)/(N-2)! 3F2(1,-1/2-p,1/2+p; 1/2,3/2-N-p; 1/2)."""
    pb = _to_ball(p)
    half = Fraction(1, 2)
    pre = 2 / ((2 * pb + 1) * ball.sqrt(2 * ball.pi()))
    ratio = _rgamma_ratio(pb + (N - half), BigReal(N - 1))
    if isinstance(p, Fraction):
        numer = (1, -half - p, half + p)
        denom = (half, Fraction(3, 2) - N - p)
    else:
        numer = (1, -pb - half, pb + half)
        denom = (BigReal(half), Fraction(3, 2) - N - pb)
    f = _hyp_pfq(numer, denom, half)
    return pre * ratio * f


def _gamma_term(N: int, p) -> BigReal:
    """2^p Gamma(p + N/2) / Gamma(N/2)."""
    pb = _to_ball(p)
    return _pow2(p) * _rgamma_ratio(pb + Fraction(N, 2), BigReal(Fraction(N, 2)))


def _extra_bits(N: int, p) -> int:
    # observed loss in the 3F2 sums is a few bits; _adaptive retries if not
    return 16


def _adaptive(fn, ctx: PrecisionContext, extra: int = 16) -> BigReal:
    """Evaluate ``fn()`` and retry at higher precision until the ball is
    narrow enough for ``ctx.target_bits``."""
    for _ in range(4):
        with ctx.extended(extra).working():
            v = fn()
            rel = v.rel_err()
            goal = mpmath.ldexp(1, -ctx.target_bits - 2)
            if rel <= goal or v.rad == 0:
                return v.rounded(ctx.target_bits)
            lost = int(mpmath.log(rel / goal, 2)) + 1 if rel != mpmath.inf else ctx.target_bits
        extra += lost + 16
    return v.rounded(ctx.target_bits)


def _real_moment_ball(N: int, p) -> BigReal:
    if N == 1:
        # a 1 x 1 GinOE matrix is a standard Gaussian scalar
        pb = _to_ball(p)
        return _pow2(p) * _gamma(pb + Fraction(1, 2)) / ball.sqrt(ball.pi())
    h = _hyp_term(N, p)
    if N % 2:
        return h + _gamma_term(N, p)
    return h


def moment_real(N: int, p, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentValue:
    """M_{2p,N}, the mean of sum |x|^(2p) over real eigenvalues, for complex p
    with Re(p) > -1/2 (p not a positive half-integer)."""
    p = _as_param(p)
    _check_real_domain(N, p)
    if N >= 2 and _is_half_integer(p):
        raise IndeterminateParametersError(
            "the 3F2 parameters are indeterminate at half-integer p; use moment_real_halfint"
        )
    v = _adaptive(lambda: _real_moment_ball(N, p), ctx)
    return MomentValue(v, Method.HYPERGEOMETRIC, {"N": N, "p": p})


def moment_complex_eigs(N: int, p, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentValue:
    """Mean of sum lambda^(2p) over the non-real eigenvalues."""
    p = _as_param(p)
    if not isinstance(N, Integral) or N < 2:
        raise DomainError("N must be an integer >= 2")
    if not (isinstance(p, Fraction) and p.denominator == 1 and p >= 1):
        raise DomainError("complex-eigenvalue moments are defined here for integer p >= 1")

    def fn():
        v = -_hyp_term(N, p)
        return v + _gamma_term(N, p) if N % 2 == 0 else v

    return MomentValue(_adaptive(fn, ctx), Method.HYPERGEOMETRIC, {"N": N, "p": p})


def trace_moment(N: int, p: int) -> int:
    """E Tr G^(2p) = N (N+2) ... (N+2p-2)."""
    if not isinstance(p, Integral) or p < 1:
        raise DomainError("trace moments are defined for integer p >= 1")
    if not isinstance(N, Integral) or N < 1:
        raise DomainError("N must be a positive integer")
    out = 1
    for j in range(p):
        out *= N + 2 * j
    return out


# -- half-integer orders -------------------------------------------------------

def moment_real_halfint(N: int, q: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentValue:
    """M_{2p,N} at p = q + 1/2 as the limit of the analytic continuation.

    Symmetric averages g(e) = (M(p+e) + M(p-e))/2 cancel the odd part; two
    Richardson steps on (e, e/2) and (e/2, e/4) give two estimates whose gap
    bounds the remaining O(e^4) error.
    """
    if not isinstance(q, Integral) or q < 0:
        raise DomainError("q must be a nonnegative integer")
    if N == 1:
        return moment_real(1, Fraction(2 * q + 1, 2), ctx)
    p = Fraction(2 * q + 1, 2)
    eps_bits = max(ctx.target_bits // 3, 16)
    eps = Fraction(1, 2**eps_bits)
    wctx = ctx.extended(eps_bits + _extra_bits(N, p))
    with wctx.working():
        def g(e):
            return (_real_moment_ball(N, p + e) + _real_moment_ball(N, p - e)) / 2

        g1, g2, g4 = g(eps), g(eps / 2), g(eps / 4)
        r_a = (4 * g2 - g1) / 3
        r_b = (4 * g4 - g2) / 3
        defect = abs(r_a.mid - r_b.mid)
        val = BigReal._raw(r_b.mid, r_b.rad + r_a.rad + defect)
        tol = abs(val.mid) * mpmath.ldexp(1, -(ctx.target_bits // 2))
        if defect > tol:
            raise ExtrapolationUnstableError(
                f"Richardson estimates differ by {mpmath.nstr(defect, 5)}"
            )
        meta = {"N": N, "p": p, "eps": eps, "defect": defect}
        return MomentValue(val.rounded(ctx.target_bits), Method.EXTRAPOLATION, meta)


# -- M_0 and M_2 -----------------------------------------------------------------

def m0_exact(N: int) -> Sqrt2Rational:
    """Mean number of real eigenvalues as an exact element of Q(sqrt 2)."""
    if not isinstance(N, Integral) or N < 1:
        raise DomainError("N must be a positive integer")
    if N % 2:
        s = sum((Fraction(double_factorial(4 * k - 3), double_factorial(4 * k - 2))
                 for k in range(1, (N - 1) // 2 + 1)), Fraction(0))
        return Sqrt2Rational(1, s)
    s = sum((Fraction(double_factorial(4 * k - 1), double_factorial(4 * k))
             for k in range(N // 2)), Fraction(0))
    return Sqrt2Rational(0, s)


def _m0_hyp_ball(N: int) -> BigReal:
    half = Fraction(1, 2)
    pre = ball.sqrt(2 / ball.pi()) * _rgamma_ratio(BigReal(N + half), BigReal(N))
    return half + pre * _hyp_pfq((1, -half), (N,), half)


def m0_hyp(N: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentValue:
    """M_0 from its Gauss hypergeometric closed form."""
    if not isinstance(N, Integral) or N < 2:
        raise DomainError("N must be an integer >= 2")
    with ctx.extended(16).working():
        return MomentValue(_m0_hyp_ball(N).rounded(ctx.target_bits), Method.HYPERGEOMETRIC,
                           {"N": N, "p": 0})


def _m2_hyp_ball(N: int) -> BigReal:
    half = Fraction(1, 2)
    pre = ball.sqrt(2 / ball.pi()) * _rgamma_ratio(BigReal(N + Fraction(3, 2)), BigReal(N))
    f1 = _hyp_pfq((2, -half), (N + 1,), half)
    f2 = _hyp_pfq((1, Fraction(-3, 2)), (N,), half)
    return pre * (f1 / (2 * N) + f2 / 3) + Fraction(N, 2)


def m2_hyp(N: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentValue:
    """M_2 from a pair of Gauss hypergeometric functions."""
    if not isinstance(N, Integral) or N < 2:
        raise DomainError("N must be an integer >= 2")
    with ctx.extended(16).working():
        return MomentValue(_m2_hyp_ball(N).rounded(ctx.target_bits), Method.HYPERGEOMETRIC,
                           {"N": N, "p": 1})


def m2_recognized(N: int, search_bits: int | None = None,
                  verify_bits: int | None = None) -> MomentValue:
    """M_2 as an element of Q(sqrt 2), recognized numerically.

    The rational part is the parity term (N for odd N, 0 for even N); the
    sqrt(2) coefficient is reconstructed from a ``search_bits`` evaluation by
    continued fractions and then checked against a ``verify_bits`` one. The
    result is flagged as recognized rather than proven. The coefficient
    needs about 4N bits, so the default precision grows with N.
    """
    if not isinstance(N, Integral) or N < 2:
        raise DomainError("N must be an integer >= 2")
    if search_bits is None:
        search_bits = max(512, 8 * N + 256)
    if verify_bits is None:
        verify_bits = 2 * search_bits
    a = Fraction(N if N % 2 else 0)
    with mpmath.workprec(search_bits + 32):
        v = _m2_hyp_ball(N)
        b_approx = (v.mid - a) / mpmath.sqrt(2)
        num, den = _mpf_ratio(b_approx)
        b = Fraction(num, den).limit_denominator(2 ** (search_bits // 2 - 16))
    cand = Sqrt2Rational(a, b)
    with mpmath.workprec(verify_bits + 32):
        check = _m2_hyp_ball(N)
        diff = abs(cand.to_ball().mid - check.mid)
        if diff > check.rad + mpmath.ldexp(1, -verify_bits + 8) * abs(check.mid):
            raise InternalInconsistencyError(f"M_2 for N={N} was not recognized in Q(sqrt 2)")
    return MomentValue(cand, Method.EXACT_SUM,
                       {"N": N, "p": 1, "recognized": True, "verified_bits": verify_bits})


# -- three-term recurrence --------------------------------------------------------

def recurrence_coefficients(N: int, p: int) -> tuple:
    """(c0, c1, c2) with c0 M_{2p} = c1 M_{2p-2} - c2 M_{2p-4}."""
    return (2 * (2 * p + 1),
            (2 * p - 1) * (6 * p + 4 * N - 5),
            (2 * p - 3) * (2 * p + N - 4) * (2 * p + 2 * N - 3))


def recurrence_residual(N: int, p, m_p, m_p1, m_p2):
    """c0 M_{2p} - c1 M_{2p-2} + c2 M_{2p-4} for any arithmetic type and any p."""
    if isinstance(p, Integral):
        c0, c1, c2 = recurrence_coefficients(N, int(p))
    else:
        pb = p
        c0 = 2 * (2 * pb + 1)
        c1 = (2 * pb - 1) * (6 * pb + 4 * N - 5)
        c2 = (2 * pb - 3) * (2 * pb + N - 4) * (2 * pb + 2 * N - 3)
    return c0 * m_p - c1 * m_p1 + c2 * m_p2


def moment_sequence_recurrence(N: int, p_max: int, seed_M0: MomentValue,
                               seed_M2: MomentValue) -> list:
    """[M_0, M_2, ..., M_{2 p_max}] by forward recurrence from two seeds.

    Exact Sqrt2Rational seeds give exact values; BigReal seeds give balls
    whose radius tracks the propagated seed error.
    """
    if p_max < 2:
        raise DomainError("p_max must be at least 2")
    v0, v2 = seed_M0.value, seed_M2.value
    exact = isinstance(v0, Sqrt2Rational) and isinstance(v2, Sqrt2Rational)
    if not exact:
        prec = max(mpmath.mp.prec, 64)
        v0, v2 = seed_M0.ball(prec), seed_M2.ball(prec)
    seq = [v0, v2]
    for p in range(2, p_max + 1):
        c0, c1, c2 = recurrence_coefficients(N, p)
        seq.append((c1 * seq[p - 1] - c2 * seq[p - 2]) / c0)
    meta = {"N": N, "seeds": (seed_M0.method.value, seed_M2.method.value)}
    if seed_M2.meta.get("recognized"):
        meta["recognized"] = True
    return [MomentValue(v, Method.RECURRENCE, dict(meta, p=k)) for k, v in enumerate(seq)]


def exact_moment_sequence(N: int, p_max: int) -> list:
    """Exact Q(sqrt 2) sequence seeded by m0_exact and the recognized M_2."""
    m0 = MomentValue(m0_exact(N), Method.EXACT_SUM, {"N": N, "p": 0})
    return moment_sequence_recurrence(N, p_max, m0, m2_recognized(N))


# -- contiguous relation among the 3F2 family ------------------------------------------

def _f32(N, q) -> BigReal:
    half = Fraction(1, 2)
    if isinstance(q, Fraction):
        return _hyp_pfq((1, -half - q, half + q), (half, Fraction(3, 2) - N - q), half)
    qb = _to_ball(q)
    return _hyp_pfq((1, -qb - half, qb + half), (BigReal(half), Fraction(3, 2) - N - qb), half)


def hyp3f2_contiguous_check(N: int, p, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """LHS - RHS of the three-term contiguous relation linking
    F(q) = 3F2(1, -1/2-q, 1/2+q; 1/2, 3/2-N-q; 1/2) at q = p, p+1, p+2."""
    p = _as_param(p)
    with ctx.extended(_extra_bits(N, p) + 8).working():
        pb = _to_ball(p)
        f0, f1, f2 = _f32(N, p), _f32(N, p + 1), _f32(N, p + 2)
        lhs = (2 * N + 2 * pb - 1) * (2 * N + 2 * pb + 1) * f2
        rhs = ((6 * pb + 4 * N + 7) * (2 * N + 2 * pb - 1) * f1
               - 2 * (2 * pb + N) * (2 * N + 2 * pb + 1) * f0)
        return (lhs - rhs).rounded(ctx.target_bits)


# -- quadrature oracles ---------------------------------------------------------------

def moment_real_quadrature_many(N: int, ps, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list:
    """2 int_0^inf x^(2p) rho_N(x) dx for several real p > -1/2 at once."""
    ps = [_as_param(p) for p in ps]
    for p in ps:
        if not isinstance(p, Fraction):
            raise DomainError("the quadrature oracle takes real p")
        _check_real_domain(N, p)
    vals = integrate_powers(N, [2 * p for p in ps], ctx)
    return [MomentValue(v, Method.QUADRATURE, {"N": N, "p": p}) for v, p in zip(vals, ps)]


def moment_real_quadrature(N: int, p, ctx: PrecisionContext = DEFAULT_CONTEXT) -> MomentValue:
    return moment_real_quadrature_many(N, [p], ctx)[0]


def moment_complex_quadrature(N: int, p: int, prec: int = 96) -> MomentValue:
    """Oracle for the complex-eigenvalue moment: 4 x the first-quadrant polar
    integral of r^(2p) cos(2 p theta) rho_c, at ``prec`` bits.

    Uses mpmath's erfc and incomplete gamma directly so the oracle shares no
    special-function code with the closed form.
    """
    if not isinstance(N, Integral) or N < 2 or not isinstance(p, Integral) or p < 1:
        raise DomainError("needs integer N >= 2 and p >= 1")
    with mpmath.workprec(prec):
        tol = mpmath.ldexp(1, -prec + 24)
        norm = mpmath.sqrt(2 / mpmath.pi) / mpmath.factorial(N - 2)

        def h(y):
            s2y = mpmath.sqrt(2) * y
            return y * mpmath.erfc(s2y) * mpmath.exp(s2y * s2y)

        def inner(r):
            g = integrate_gl(lambda th: mpmath.cos(2 * p * th) * h(r * mpmath.sin(th)),
                             0, mpmath.pi / 2, tol, n=20)
            return g

        # y erfc(sqrt2 y) e^{2y^2} <= 1/sqrt(2 pi), so the integrand is bounded
        # by r^(2p+1) Gamma(N-1, r^2) times a constant; pick R from that envelope
        R = mpf(math.ceil(math.sqrt(N))) + 2
        while (mpmath.gammainc(N - 1, R * R) * R ** (2 * p + 1) * norm) > tol * mpmath.ldexp(1, -8):
            R += 1
        errs = []

        def outer(r):
            g = inner(r)
            errs.append(g.err * r ** (2 * p + 1))
            return norm * mpmath.gammainc(N - 1, r * r) * r ** (2 * p + 1) * g.value

        res = integrate_gl(outer, 0, R, tol * 16, n=20, breakpoints=range(1, int(R)))
        inner_err = max(errs) * R * norm
        v = 4 * res.value
        err = 4 * (res.err + inner_err + tol * 16)
        return MomentValue(BigReal._raw(v, err), Method.QUADRATURE, {"N": N, "p": p})
