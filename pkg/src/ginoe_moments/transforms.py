"""Moment generating function and Stieltjes transform of the real density.

u(t) = int e^(tx) rho(x) dx is summed from the even moments,
u(t) = sum_p M_{2p} t^(2p)/(2p)!, with the moments taken from the
hypergeometric closed form (not the recurrence) so that the fourth-order ODE
residual is an independent check. The series tail is bounded by

    M_{2p} <= U_p = (1/sqrt(2 pi)) sum_{j<=N-2} Gamma(p+j+1/2)/j!
                    + K 2^((2p+N)/2) Gamma(p+N/2),

which follows from gamma(s, y) <= Gamma(s) in the density, and
U_{p+1} <= (2p+N) U_p.

W(t) = int rho(x)/(t-x) dx is computed by quadrature of the even-folded
kernel; its derivatives use the differentiated kernel.

The seventh-order operator obtained by composing the fourth-order MGF
operator is a consequence of the fourth-order equation and is not checked
separately.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf

from .density import _check_N, _rho_real, cutoff_for, density_tail_bound
from .errors import DomainError, NonConvergenceError
from .moments import _m0_hyp_ball, _m2_hyp_ball, _real_moment_ball
from .numerics.ball import BigReal
from .numerics.context import DEFAULT_CONTEXT, PrecisionContext
from .numerics.quadrature import integrate_gl_multi


@dataclass(frozen=True)
class TransformValue:
    t: object
    value: BigReal
    derivs: tuple = ()

    @property
    def err(self):
        return self.value.rad

    def derivative(self, k: int) -> BigReal:
        return self.value if k == 0 else self.derivs[k - 1]


def _moment_bound(N: int, p: int) -> mpf:
    c = 1 / mpmath.sqrt(2 * mpmath.pi)
    s = mpmath.fsum(mpmath.gamma(p + j + mpf(0.5)) / mpmath.factorial(j) for j in range(N - 1))
    k = mpmath.power(2, mpf(N - 3) / 2) * mpmath.gamma(mpf(N - 1) / 2)
    second = k * mpmath.power(2, mpf(2 * p + N) / 2) * mpmath.gamma(mpf(2 * p + N) / 2)
    return c * s + c * second / mpmath.factorial(N - 2)


def _mgf_terms_needed(N: int, t: mpf, k_max: int, tol: mpf, p_cap: int = 4000):
    """Smallest P such that the tails of every derivative order <= k_max,
    starting at p = P, are below ``tol``; returns (P, tail bounds)."""
    at = abs(t)
    P = (k_max + 1) // 2 + 1
    while P < p_cap:
        tails = []
        for k in range(k_max + 1):
            ratio = (2 * P + N) * at * at / ((2 * P + 2 - k) * (2 * P + 1 - k))
            if ratio >= mpf(0.5):
                break
            lead = _moment_bound(N, P) * at ** (2 * P - k) / mpmath.factorial(2 * P - k)
            tails.append(lead / (1 - ratio))
        else:
            if max(tails) <= tol:
                return P, tails
        P += 1
    raise NonConvergenceError("moment series tail bound did not close; lower |t|")


def mgf_value(N: int, t, k_derivs: int = 0, ctx: PrecisionContext = DEFAULT_CONTEXT,
              moments: str = "hyp") -> TransformValue:
    """u(t) and its first ``k_derivs`` derivatives.

    ``moments="recurrence"`` sums moments produced by the three-term
    recurrence instead of the closed form.
    """
    _check_N(N)
    if k_derivs < 0:
        raise DomainError("k_derivs must be >= 0")
    with ctx.working():
        # a rational t must become a ball at working precision, not the ambient one
        tb = BigReal.coerce(t)
        tol = mpmath.ldexp(1, -ctx.working_bits) * max(mpf(1), mpmath.exp(abs(tb.mid)))
        P, tails = _mgf_terms_needed(N, tb.mid, k_derivs, tol)
    # forward recurrence loses up to ~2 bits per step; the closed form does not
    wctx = ctx.extended(16 + (2 * P if moments == "recurrence" else 0))
    with wctx.working():
        if moments == "hyp":
            ms = [_m0_hyp_ball(N)] + [_real_moment_ball(N, Fraction(p)) for p in range(1, P)]
        elif moments == "recurrence":
            from .moments import recurrence_coefficients
            ms = [_m0_hyp_ball(N), _m2_hyp_ball(N)]
            for p in range(2, P):
                c0, c1, c2 = recurrence_coefficients(N, p)
                ms.append((c1 * ms[p - 1] - c2 * ms[p - 2]) / c0)
        else:
            raise DomainError(f"unknown moment source {moments!r}")
        out = []
        for k in range(k_derivs + 1):
            total = BigReal(0)
            for p in range(P):
                e = 2 * p - k
                if e < 0:
                    continue
                total = total + ms[p] * tb ** e / math.factorial(e)
            total = BigReal._raw(total.mid, total.rad + tails[k])
            out.append(total.rounded(ctx.target_bits))
    return TransformValue(tb, out[0], tuple(out[1:]))


def _mgf_residual(N: int, t: BigReal, u) -> BigReal:
    u0, u1, u2, u3, u4 = u
    t2 = t * t
    return (2 * t * u4 - (3 * t2 - 8) * u3 + t * (t2 - 4 * N - 13) * u2
            + ((3 * N + 2) * t2 - 8 * N - 8) * u1 + (2 * N * N + N) * t * u0)


def mgf_ode_residual(N: int, t, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """D_N[t] u = 2t u'''' - (3t^2-8) u''' + t(t^2-4N-13) u''
    + ((3N+2)t^2-8N-8) u' + (2N^2+N) t u, expected to contain 0."""
    v = mgf_value(N, t, 4, ctx)
    with ctx.working():
        tb = BigReal.coerce(t)
        return _mgf_residual(N, tb, [v.value, *v.derivs]).rounded(ctx.target_bits)


# -- Stieltjes transform --------------------------------------------------------------

def _as_complex_ball(t) -> BigReal:
    tb = BigReal.coerce(t)
    if not tb.is_complex:
        tb = BigReal._raw(mpmath.mpc(tb.mid), tb.rad)
    return tb


def stieltjes_value(N: int, t, k_derivs: int = 0, ctx: PrecisionContext = DEFAULT_CONTEXT,
                    rel_tol=None) -> TransformValue:
    """W(t) = int rho(x)/(t-x) dx and d^k W/dt^k for k <= k_derivs, Im t != 0.

    The density has full support on the real line, so real t is rejected.
    """
    _check_N(N)
    tb = _as_complex_ball(t)
    if tb.rad:
        raise DomainError("t must be given exactly")
    t0 = tb.mid
    if mpmath.im(t0) == 0:
        raise DomainError("W(t) needs Im(t) != 0: the density has no gap on the real line")
    K = k_derivs + 1
    bits = ctx.target_bits
    with ctx.working():
        rtol = mpmath.ldexp(1, -bits) if rel_tol is None else mpf(rel_tol)
        dist = abs(mpmath.im(t0))
        # scale of the k-th derivative integral, used only for tolerances
        scales = [math.factorial(k) / max(dist, abs(t0) / 4) ** (k + 1) for k in range(K)]
        tols = [rtol * s for s in scales]
        # past X the kernel is at most k!/|Im t|^(k+1), or k!(2/X)^(k+1) once X >= 2|t|
        tail_tol = min(tols[k] * dist ** (k + 1) / math.factorial(k) for k in range(K)) / 8
        X = cutoff_for(N, 0, tail_tol)
        if X < 2 * abs(t0) + 1 and 2 * abs(t0) + 1 < X + 64:
            X = mpmath.ceil(2 * abs(t0)) + 1

        def f(x):
            r = _rho_real(N, BigReal._raw(x, mpf(0)))
            vals, rads = [], []
            a, b = 1 / (t0 - x), 1 / (t0 + x)
            pa, pb = a, b
            for k in range(K):
                kern = (-1) ** k * math.factorial(k) * (pa + pb)
                vals.append(kern * r.mid)
                rads.append(abs(kern) * r.rad)
                pa, pb = pa * a, pb * b
            return vals + rads

        re_t = abs(mpmath.re(t0))
        bps = list(range(1, int(X)))
        if re_t < X:
            bps.append(re_t)
        parts = integrate_gl_multi(f, 0, X, tols + [mpmath.inf] * K, breakpoints=bps)
        tail0 = density_tail_bound(N, X, 0)
        out = []
        for k in range(K):
            q, qr = parts[k], parts[K + k]
            kb = min(2 / X, 1 / dist) if X >= 2 * abs(t0) else 1 / dist
            tail = 2 * tail0 * math.factorial(k) * kb ** (k + 1)
            err = q.err + 2 * abs(qr.value) + tail
            out.append(BigReal._raw(q.value, err).rounded(ctx.target_bits))
    return TransformValue(tb, out[0], tuple(out[1:]))


def stieltjes_ode_residual(N: int, t, ctx: PrecisionContext = DEFAULT_CONTEXT, m0=None,
                           m2=None) -> BigReal:
    """t^2 W''' + t(3t^2-3N+4) W'' + (2t^2-2N+1)(t^2-N+2) W'
    - ((1+4N-2t^2) M_0 - 6 M_2), expected to contain 0.

    M_0 and M_2 default to the size-N moments; pass others to test an
    alternative reading of the inhomogeneous term.
    """
    w = stieltjes_value(N, t, 3, ctx)
    with ctx.working():
        tb = _as_complex_ball(t)
        M0 = BigReal.coerce(m0) if m0 is not None else _m0_hyp_ball(N)
        M2 = BigReal.coerce(m2) if m2 is not None else _m2_hyp_ball(N)
        t2 = tb * tb
        w1, w2, w3 = w.derivs
        lhs = t2 * w3 + tb * (3 * t2 - 3 * N + 4) * w2 + (2 * t2 - 2 * N + 1) * (t2 - N + 2) * w1
        rhs = (1 + 4 * N - 2 * t2) * M0 - 6 * M2
        return (lhs - rhs).rounded(ctx.target_bits)
