"""High-precision quadrature used by the oracle routes.

Two rules: adaptive Gauss-Legendre panels (bisection driven by an n vs 2n
comparison) for smooth integrands, and tanh-sinh for panels with an
algebraic endpoint singularity such as x^(2p) at 0 for fractional p.

Error estimates are the usual a-posteriori differences between two rules,
which overestimate the error of the finer rule for analytic integrands.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mpf

from ..errors import NonConvergenceError


@dataclass(frozen=True)
class QuadResult:
    value: object
    err: mpf
    evaluations: int


@lru_cache(maxsize=256)
def gauss_legendre_rule(n: int, prec: int):
    """Nodes and weights on [-1, 1] at ``prec`` bits (Newton on P_n)."""
    nodes, weights = [], []
    with mpmath.workprec(prec + 20):
        tol = mpmath.ldexp(1, -(prec + 10))
        for i in range(1, n + 1):
            x = mpmath.cos(mpmath.pi * (i - mpf(0.25)) / (n + mpf(0.5)))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < tol:
                    break
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    with mpmath.workprec(prec):
        pairs = sorted(zip(nodes, weights))
        return tuple(+x for x, _ in pairs), tuple(+w for _, w in pairs)


def default_degree(prec: int) -> int:
    return max(16, prec // 6)


def _gl_panel(f, a, b, n, prec):
    """Vector-valued panel: f returns a sequence; returns per-component
    (integral, integral of |f|) and the evaluation count."""
    xs, ws = gauss_legendre_rule(n, prec)
    half = (b - a) / 2
    mid = (a + b) / 2
    vals = [f(mid + half * x) for x in xs]
    m = len(vals[0])
    s = [half * mpmath.fsum(w * v[i] for w, v in zip(ws, vals)) for i in range(m)]
    sabs = [abs(half) * mpmath.fsum(w * abs(v[i]) for w, v in zip(ws, vals)) for i in range(m)]
    return s, sabs, len(xs)


def integrate_gl_multi(f, a, b, abs_tols, n: int | None = None, max_depth: int = 40,
                       breakpoints=()) -> list:
    """Adaptive Gauss-Legendre for a vector-valued integrand on [a, b].

    ``f(x)`` returns one value per component; a panel is accepted once every
    component meets its share of ``abs_tols``. Sharing the panel tree lets a
    family of integrals reuse each (expensive) integrand evaluation.

    Panels are processed in a fixed left-to-right order and summed with
    ``fsum``, so the result does not depend on evaluation scheduling.
    """
    prec = mpmath.mp.prec
    n = n or default_degree(prec)
    a, b = mpf(a), mpf(b)
    edges = [a] + sorted({mpf(x) for x in breakpoints if a < x < b}) + [b]
    width = b - a
    accepted = []
    evals = 0
    stack = [(edges[i], edges[i + 1], 0) for i in reversed(range(len(edges) - 1))]
    rel_budget = mpmath.ldexp(1, -prec + 24)
    while stack:
        lo, hi, depth = stack.pop()
        q1, _, e1 = _gl_panel(f, lo, hi, n, prec)
        q2, qa, e2 = _gl_panel(f, lo, hi, 2 * n, prec)
        evals += e1 + e2
        diffs = [abs(x - y) for x, y in zip(q1, q2)]
        frac = (hi - lo) / width
        ok = all(t == mpmath.inf or d <= t * frac for d, t in zip(diffs, abs_tols))
        if ok or depth >= max_depth:
            if not ok:
                raise NonConvergenceError("adaptive quadrature hit the depth limit")
            # rounding in the integrand values, budgeted at 2^-(prec-24)
            errs = [d + s * rel_budget for d, s in zip(diffs, qa)]
            accepted.append((lo, q2, errs))
            continue
        m = (lo + hi) / 2
        stack.append((m, hi, depth + 1))
        stack.append((lo, m, depth + 1))
    accepted.sort(key=lambda t: t[0])
    out = []
    for i in range(len(abs_tols)):
        total = mpmath.fsum(q[i] for _, q, _ in accepted)
        err = mpmath.fsum(e[i] for _, _, e in accepted)
        out.append(QuadResult(total, err, evals))
    return out


def integrate_gl(f, a, b, abs_tol, n: int | None = None, max_depth: int = 40,
                 breakpoints=()) -> QuadResult:
    """Adaptive Gauss-Legendre on [a, b] to absolute tolerance ``abs_tol``."""
    return integrate_gl_multi(lambda x: (f(x),), a, b, [abs_tol], n, max_depth,
                              breakpoints)[0]


def integrate_tanh_sinh(f, a, b, abs_tol, max_level: int = 14) -> QuadResult:
    """Tanh-sinh on [a, b]; robust to algebraic singularities at both ends.

    The node set nests, so each level reuses the previous sum.
    """
    prec = mpmath.mp.prec
    a, b = mpf(a), mpf(b)
    half = (b - a) / 2
    hpi = mpmath.pi / 2
    tiny = mpmath.ldexp(1, -prec)
    # truncate the t-range where the weights fall below the working precision
    t_max = mpf(1)
    while True:
        u = hpi * mpmath.sinh(t_max)
        w = hpi * mpmath.cosh(t_max) / mpmath.cosh(u) ** 2
        if w < tiny * tiny or t_max > 12:
            break
        t_max += mpf(0.25)

    def contrib(t):
        u = hpi * mpmath.sinh(t)
        cu = mpmath.cosh(u)
        w = hpi * mpmath.cosh(t) / (cu * cu)
        # distance to the endpoint, computed without cancellation
        d = half * mpmath.exp(-u) / cu
        if d == 0:
            return mpf(0), mpf(0)
        v1 = f(a + d)
        v2 = f(b - d)
        return w * (v1 + v2), w * (abs(v1) + abs(v2))

    h = mpf(1)
    evals = 1
    f0 = f((a + b) / 2)
    s = hpi * f0
    sabs = hpi * abs(f0)
    k = 1
    while k * h <= t_max:
        c, ca = contrib(k * h)
        s += c
        sabs += ca
        evals += 2
        k += 1
    prev = half * h * s
    for level in range(1, max_level + 1):
        h /= 2
        k = 1
        while k * h <= t_max:
            c, ca = contrib(k * h)
            s += c
            sabs += ca
            evals += 2
            k += 2
        cur = half * h * s
        diff = abs(cur - prev)
        if diff <= abs_tol and level >= 3:
            err = diff + abs(half * h * sabs) * mpmath.ldexp(1, -prec + 24)
            return QuadResult(cur, err, evals)
        prev = cur
    raise NonConvergenceError("tanh-sinh did not reach the requested tolerance")
