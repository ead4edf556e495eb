"""Invariant suites behind ``ginoe-moments verify``.

Each check returns a :class:`CheckResult`; ``run_checks`` never raises for a
failing check, it records the failure (including unexpected exceptions) so a
single run reports everything.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .asymptotics import (
    D0,
    a_coefficients,
    a_coefficients_via_2f1,
    b_coefficients,
    b_coefficients_via_2f1,
    d0_factorizations,
    mgf_expansion_levels,
    moment_asymptotic,
    stieltjes_expansion_levels,
)
from .density import ode_residual_density, rho_real, rho_via_generating_function
from .moments import (
    exact_moment_sequence,
    hyp3f2_contiguous_check,
    m0_exact,
    moment_complex_eigs,
    moment_real,
    moment_real_halfint,
    moment_real_quadrature_many,
    recurrence_residual,
    trace_moment,
)
from .numerics.context import PrecisionContext
from .transforms import mgf_ode_residual, stieltjes_ode_residual


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class Plan:
    prec: int
    n_grid: tuple
    p_grid: tuple
    rec_n_max: int
    rec_p_max: int
    n_random: int
    mc_N: tuple
    mc_samples: int


QUICK = Plan(prec=128, n_grid=(2, 3, 5), p_grid=(0, 1, 2), rec_n_max=8, rec_p_max=8,
             n_random=3, mc_N=(2,), mc_samples=20000)
FULL = Plan(prec=256, n_grid=tuple(range(2, 13)), p_grid=(0, 1, 2, 3, 4, 5, 6),
            rec_n_max=20, rec_p_max=20, n_random=20, mc_N=(2, 6, 10), mc_samples=100000)


def _coefficients(plan, seed):
    a, b = a_coefficients(5), b_coefficients(5)
    ok = a == a_coefficients_via_2f1(5) and b == b_coefficients_via_2f1(5)
    return ok, f"a={[str(x) for x in a]} b={[str(x) for x in b]}"


def _mgf_levels(plan, seed):
    # construction itself runs the second-derivative and operator cross-checks
    levels = mgf_expansion_levels(3)
    ok = all(op == D0 for op in d0_factorizations())
    return ok, f"levels 0..{levels.k_max} and half levels built"


TAILS = {
    2: (1,),
    3: (3, 4),
    4: (6, 22, 24),
    5: (10, 70, 200, 192),
}
HALF_LEVEL_DERIVS = {Fraction(3, 2): (1, 3, 6, 10), Fraction(5, 2): (4, 22, 70)}


def _tails(plan, seed):
    for p, want in TAILS.items():
        s, _ = moment_asymptotic(100, p, p + 1)
        if s.tail() != tuple(Fraction(w) for w in want):
            return False, f"p={p}: tail {s.tail()}"
    levels = mgf_expansion_levels(3)
    for k, want in HALF_LEVEL_DERIVS.items():
        # the first nonvanishing even derivative of level k is of order 2k + 1
        p0 = int(k + Fraction(1, 2))
        got = tuple(levels.level(k).derivative_at_zero(2 * p) for p in range(p0, p0 + len(want)))
        if got != want:
            return False, f"level {k}: derivatives {got}"
    return True, "p=2..5 tails and half-level derivatives"


def _stieltjes(plan, seed):
    levels = stieltjes_expansion_levels(2)
    orders = {str(lv.level): lv.decay_order() for lv in levels if lv.level > 0}
    ok = orders["1"] == -1 and orders["2"] == -1 and orders["3/2"] <= -3
    return ok, f"decay orders {orders}"


def _closed_vs_quadrature(plan, seed):
    ctx = PrecisionContext(plan.prec)
    worst = 0
    for N in plan.n_grid:
        quad = moment_real_quadrature_many(N, plan.p_grid, ctx)
        for p, q in zip(plan.p_grid, quad):
            v = moment_real(N, p, ctx)
            if not v.agrees_with(q):
                return False, f"N={N} p={p}: {v} vs {q}"
            worst = max(worst, float(v.err / abs(v.ball().mid)))
        h = moment_real_halfint(N, 0, ctx)
        q = moment_real_quadrature_many(N, [Fraction(1, 2)], ctx)[0]
        if not h.agrees_with(q):
            return False, f"N={N} p=1/2: {h} vs {q}"
    return True, f"max relative err {worst:.2e}"


def _recurrence(plan, seed):
    ctx = PrecisionContext(plan.prec)
    for N in range(2, plan.rec_n_max + 1):
        seq = exact_moment_sequence(N, plan.rec_p_max)
        vals = [m.value for m in seq]
        for p in range(2, plan.rec_p_max + 1):
            r = recurrence_residual(N, p, vals[p], vals[p - 1], vals[p - 2])
            if r != 0:
                return False, f"exact residual {r} at N={N} p={p}"
        for p in (0, plan.rec_p_max // 2, plan.rec_p_max):
            with mpmath.workprec(plan.prec + 64):
                if not seq[p].ball(plan.prec + 64).overlaps(moment_real(N, p, ctx).value):
                    return False, f"exact sequence disagrees with closed form at N={N} p={p}"
    rng = random.Random(seed)
    for _ in range(plan.n_random):
        N = rng.randint(2, 10)
        # M at p, p-1, p-2 all need Re > -1/2
        p = mpmath.mpc(rng.uniform(1.6, 6), rng.uniform(-3, 3))
        ms = [moment_real(N, p - k, ctx).value for k in range(3)]
        with ctx.working():
            r = recurrence_residual(N, p, *ms)
        if not r.contains_zero():
            return False, f"complex-p residual {r} at N={N} p={p}"
    return True, f"exact for N<={plan.rec_n_max}, p<={plan.rec_p_max}; {plan.n_random} complex p"


def _contiguous(plan, seed):
    ctx = PrecisionContext(plan.prec)
    rng = random.Random(seed + 1)
    for i in range(plan.n_random):
        N = rng.randint(2, 12)
        if i % 2:
            p = mpmath.mpc(rng.uniform(-0.4, 5), rng.uniform(-3, 3))
        else:
            p = Fraction(rng.randint(0, 40), 4)
        r = hyp3f2_contiguous_check(N, p, ctx)
        if not r.contains_zero():
            return False, f"N={N} p={p}: residual {r}"
    return True, f"{plan.n_random} random (N, p)"


def _sum_rule(plan, seed):
    ctx = PrecisionContext(plan.prec)
    for N in plan.n_grid:
        for p in range(1, max(plan.p_grid) + 1):
            with ctx.working():
                s = moment_real(N, p, ctx).value + moment_complex_eigs(N, p, ctx).value
            if not s.contains(trace_moment(N, p)):
                return False, f"N={N} p={p}: {s} vs {trace_moment(N, p)}"
    return True, "real + complex = trace moment"


def _odes(plan, seed):
    ctx = PrecisionContext(plan.prec)
    rng = random.Random(seed + 2)
    for _ in range(plan.n_random):
        N = rng.randint(2, 10)
        x = Fraction(rng.randint(-300, 300), 100)
        t = Fraction(rng.randint(-250, 250), 100)
        z = mpmath.mpc(rng.uniform(-3, 3), rng.choice((-1, 1)) * rng.uniform(0.3, 3))
        checks = {
            "density": ode_residual_density(N, x, ctx),
            "mgf": mgf_ode_residual(N, t, ctx),
            "stieltjes": stieltjes_ode_residual(N, z, ctx),
        }
        for name, r in checks.items():
            if not r.contains_zero():
                return False, f"{name} ODE residual {r} at N={N}"
    return True, f"{plan.n_random} random points per ODE"


def _generating_function(plan, seed):
    ctx = PrecisionContext(plan.prec)
    xs = (Fraction(0), Fraction(1, 3), Fraction(-1), Fraction(7, 4), Fraction(-5, 2))
    for N in range(2, 11):
        for x in xs:
            a = rho_via_generating_function(N, x, ctx)
            b = rho_real(N, x, ctx)
            if not a.overlaps(b):
                return False, f"N={N} x={x}: {a} vs {b}"
    return True, "N=2..10 at 5 points"


def _monte_carlo(plan, seed):
    from .montecarlo import MCConfig, empirical_real_moments

    out = []
    for N in plan.mc_N:
        s = empirical_real_moments(MCConfig(N, plan.mc_samples, seed=seed), [0, 1, 2])
        exact = {0: m0_exact(N).to_mpf(64)}
        for p in (1, 2):
            exact[p] = moment_real(N, p).value.mid
        if s.n_failed or not s.parity_ok:
            return False, f"N={N}: failed={s.n_failed} parity={s.parity_ok}"
        for p in (0, 1, 2):
            if not s.within(p, exact[p], 4.0):
                z = (s.means[p] - float(exact[p])) / s.std_errors[p]
                return False, f"N={N} p={p}: z={z:.2f}"
        out.append(N)
    return True, f"N in {out}, {plan.mc_samples} samples, within 4 SE"


CHECKS = (
    ("coefficients", _coefficients),
    ("mgf-levels", _mgf_levels),
    ("moment-tails", _tails),
    ("stieltjes-levels", _stieltjes),
    ("closed-vs-quadrature", _closed_vs_quadrature),
    ("recurrence", _recurrence),
    ("contiguous-3f2", _contiguous),
    ("sum-rule", _sum_rule),
    ("ode-residuals", _odes),
    ("generating-function", _generating_function),
    ("monte-carlo", _monte_carlo),
)


def run_checks(full: bool = False, seed: int = 0, only=None) -> list:
    plan = FULL if full else QUICK
    results = []
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn(plan, seed)
        except Exception as exc:  # a crash is a failed check, not an aborted run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return results
