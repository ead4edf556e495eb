"""Generalized hypergeometric series with a certified tail bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf

from ..errors import IndeterminateParametersError, NonConvergenceError
from .ball import BigReal, _eps
from .context import DEFAULT_CONTEXT, PrecisionContext


@dataclass(frozen=True)
class HypParams:
    numer: tuple
    denom: tuple
    z: object

    def __init__(self, numer, denom, z):
        object.__setattr__(self, "numer", tuple(numer))
        object.__setattr__(self, "denom", tuple(denom))
        object.__setattr__(self, "z", z)


def _exact_nonpositive_int(b: BigReal):
    """-n if the ball is exactly a nonpositive integer n, else None."""
    if b.rad or b.is_complex and mpmath.im(b.mid) != 0:
        return None
    m = mpmath.re(b.mid)
    if m <= 0 and mpmath.isint(m):
        return int(-m)
    return None


def _touches_nonpositive_int(b: BigReal) -> bool:
    m = mpmath.re(b.mid)
    if abs(mpmath.im(b.mid)) > b.rad or m > b.rad:
        return False
    nearest = mpmath.nint(m)
    if nearest > 0:
        nearest = mpf(0)
    return abs(b.mid - nearest) <= b.rad


def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _paired_ratio_bound(cs, ds, z, k: int):
    """sup over j >= k of |z| prod (j+c)/(j+d), for real parameters with
    k > max |c|, |d|. Each paired factor is monotone in j with limit 1, so its
    sup is max(1, value at j = k)."""
    bound = abs(z)
    for c, d in zip(sorted(cs), sorted(ds)):
        bound *= max(Fraction(1), Fraction(k + c, 1) / (k + d))
    return bound


def _hyp_pfq_rational(cs, ds, z, terminate_at, max_terms: int) -> BigReal:
    """Fast path for rational parameters: exact term ratios, mpf partial sums.

    Each term picks up at most two roundings per step (ratio conversion and
    product), and each partial sum one more, so the accumulated error is at
    most (3K+1) u sum |t_k| for K terms; ``_eps`` is already 4u.
    """
    u = _eps()
    term = mpf(1)
    total = mpf(1)
    absum = mpf(1)
    dd = list(ds) + [1]
    limit = max([abs(c) for c in cs] + [abs(d) for d in dd]) + 2
    # integer form of the term ratio: scale every parameter by L
    L = 1
    for x in (*cs, *ds):
        L = L * x.denominator // math.gcd(L, x.denominator)
    ci = [int(c * L) for c in cs]
    di = [int(d * L) for d in ds]
    zn = z.numerator * L ** len(ds)
    zd = z.denominator * L ** len(cs)
    n = terminate_at if terminate_at is not None else max_terms
    for k in range(n):
        num = zn
        for c in ci:
            num *= c + L * k
        den = zd * (k + 1)
        for d in di:
            den *= d + L * k
        term = term * (mpf(num) / den)
        total += term
        absum += abs(term)
        kk = k + 1
        if terminate_at is not None or kk < limit or kk % 8:
            continue
        if len(cs) > len(dd):
            continue
        R = _paired_ratio_bound(list(cs) + [0] * (len(dd) - len(cs)), dd, z, kk)
        if R >= 1:
            continue
        Rm = mpf(R.numerator) / R.denominator * (1 + u)
        if Rm >= 1:
            continue
        tail = abs(term) * (1 + u * (2 * kk + 2)) * Rm / (1 - Rm)
        if tail <= abs(total) * u:
            rad = absum * u * (3 * kk + 1) * 2 + tail
            return BigReal._raw(total, rad)
    if terminate_at is None:
        raise NonConvergenceError(f"pFq series did not converge in {max_terms} terms")
    return BigReal._raw(total, absum * u * (3 * n + 1) * 2)


def _hyp_pfq(numer, denom, z, max_terms: int = 200000) -> BigReal:
    """Sum the Gauss series at the current precision; returns a ball."""
    if all(_is_rational(x) for x in (*numer, *denom, z)):
        terminate_at = None
        for c in numer:
            if c <= 0 and Fraction(c).denominator == 1:
                terminate_at = int(-c) if terminate_at is None else min(terminate_at, int(-c))
        bad = [d for d in denom if d <= 0 and Fraction(d).denominator == 1]
        if not bad or (terminate_at is not None and terminate_at <= min(-int(d) for d in bad)):
            r, s = len(numer), len(denom)
            if terminate_at is not None or r < s + 1 or (r == s + 1 and abs(z) < 1):
                return _hyp_pfq_rational([Fraction(c) for c in numer],
                                         [Fraction(d) for d in denom], Fraction(z),
                                         terminate_at, max_terms)
    cs = [BigReal.coerce(c) for c in numer]
    ds = [BigReal.coerce(d) for d in denom]
    zb = BigReal.coerce(z)

    terminate_at = None
    for c in cs:
        n = _exact_nonpositive_int(c)
        if n is not None:
            terminate_at = n if terminate_at is None else min(terminate_at, n)
    for d in ds:
        m = _exact_nonpositive_int(d)
        if m is not None:
            if terminate_at is None or terminate_at > m:
                raise IndeterminateParametersError(
                    f"denominator parameter {-m} is a nonpositive integer and the series "
                    "does not terminate before it"
                )
        elif _touches_nonpositive_int(d) and (terminate_at is None):
            raise IndeterminateParametersError("denominator parameter ball contains a pole")

    u = _eps()
    one = BigReal._raw(mpf(1), mpf(0))
    term = one
    total = one
    if terminate_at is not None:
        for k in range(terminate_at):
            num = zb
            for c in cs:
                num = num * (c + k)
            den = BigReal._raw(mpf(k + 1), mpf(0))
            for d in ds:
                den = den * (d + k)
            term = term * num / den
            total = total + term
        return total

    r, s = len(cs), len(ds)
    if r > s + 1:
        raise NonConvergenceError("pFq with r > s+1 diverges away from z = 0")
    absz = zb.mag()
    if r == s + 1 and absz >= 1:
        raise NonConvergenceError("pFq with r = s+1 requires |z| < 1")
    cmag = [c.mag() for c in cs]
    dmag = [d.mag() for d in ds] + [mpf(1)]
    # monitoring starts once k exceeds every parameter modulus
    k0 = int(max(cmag + dmag)) + 2

    for k in range(max_terms):
        num = zb
        for c in cs:
            num = num * (c + k)
        den = BigReal._raw(mpf(k + 1), mpf(0))
        for d in ds:
            den = den * (d + k)
        term = term * num / den
        total = total + term
        kk = k + 1  # index of the term just added
        if kk < k0:
            continue
        rstar = absz
        for i, dm in enumerate(dmag):
            rstar = rstar * ((kk + cmag[i]) if i < r else 1) / (kk - dm)
        if rstar >= 1:
            continue
        tail = term.mag() * rstar / (1 - rstar)
        scale = abs(total.mid)
        if tail <= scale * u or (scale == 0 and tail == 0):
            return BigReal._raw(total.mid, total.rad + tail)
    raise NonConvergenceError(f"pFq series did not converge in {max_terms} terms")


def hyp_pfq(params: HypParams, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """rFs(numer; denom; z) as a :class:`MomentValue` whose err bounds the
    rounding error plus the truncated tail."""
    from ..values import Method, MomentValue

    with ctx.working():
        v = _hyp_pfq(params.numer, params.denom, params.z)
        return MomentValue(v.rounded(ctx.target_bits), Method.HYPERGEOMETRIC)


def as_param(q) -> object:
    """Normalize user-facing parameter input (str like '-1/2', numbers)."""
    if isinstance(q, str):
        return Fraction(q)
    return q
