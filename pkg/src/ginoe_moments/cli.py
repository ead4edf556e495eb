"""Command-line front end.

Every command builds one output record: the command, its parameters, the
precision used, the values (decimal strings with error bounds, exact values
as "num/den" strings) and the method that produced them. ``--format`` picks
JSON (default), CSV (one row per value) or plain text.

Exit codes: 0 ok, 2 usage, 3 domain error, 4 verification failure,
5 internal inconsistency.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from fractions import Fraction

import mpmath

from .errors import DomainError, GinoeError, InternalInconsistencyError
from .numerics.ball import BigReal
from .numerics.context import PrecisionContext

log = logging.getLogger("ginoe_moments")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4
EXIT_INTERNAL = 5


# -- formatting -----------------------------------------------------------------

def _digits(bits: int) -> int:
    # enough decimal digits to round-trip a ``bits``-bit midpoint
    return int(math.ceil(bits * math.log10(2))) + 1


def _dec(x, bits: int) -> str:
    return mpmath.nstr(mpmath.mpf(x), _digits(bits), strip_zeros=False)


def _err(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 3)


def _ball(b: BigReal, bits: int, **extra) -> dict:
    out = dict(extra)
    if b.is_complex:
        out["re"] = _dec(mpmath.re(b.mid), bits)
        out["im"] = _dec(mpmath.im(b.mid), bits)
    else:
        out["value"] = _dec(b.mid, bits)
    out["err"] = _err(b.rad)
    return out


def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _record(args, values, method=None, **extra) -> dict:
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "format", "prec", "command", "verbose") and v is not None}
    rec = {"command": args.command, "params": params, "prec": args.prec}
    if method is not None:
        rec["method"] = method
    rec["values"] = values
    rec.update(extra)
    return rec


def _jsonable(x):
    if isinstance(x, Fraction):
        return _q(x)
    if isinstance(x, (mpmath.mpf, mpmath.mpc, complex)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def render(rec: dict, fmt: str) -> str:
    rec = _jsonable(rec)
    if fmt == "json":
        return json.dumps(rec, indent=2)
    rows = []
    for v in rec.get("values", []):
        row = {"command": rec["command"], **{k: v2 for k, v2 in rec["params"].items()
                                             if not isinstance(v2, (list, dict))}}
        row.update({k: (json.dumps(x) if isinstance(x, (list, dict)) else x)
                    for k, x in v.items()})
        rows.append(row)
    if fmt == "csv":
        keys = []
        for r in rows:
            keys += [k for k in r if k not in keys]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = []
    for v in rec.get("values", []):
        name = v.get("name", "")
        rest = ", ".join(f"{k}={x}" for k, x in v.items()
                         if k not in ("name", "value", "err", "re", "im"))
        if "re" in v:
            body = f"({v['re']}) + ({v['im']})i"
        else:
            body = str(v.get("value", ""))
        err = f" +/- {v['err']}" if "err" in v else ""
        lines.append(f"{name}{' [' + rest + ']' if rest else ''} = {body}{err}")
    return "\n".join(lines)


# -- argument parsing helpers ------------------------------------------------------

def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}")


def _param(s: str):
    """A real rational like 3/2 or a complex number like 1.5+2j."""
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        z = complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")
    return Fraction(z.real) if z.imag == 0 else mpmath.mpc(z)


def _complex(s: str):
    try:
        return mpmath.mpc(complex(s.replace("i", "j")))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}")


def _grid(s: str):
    try:
        a, b, n = s.split(":")
        a, b, n = Fraction(a), Fraction(b), int(n)
    except ValueError:
        raise DomainError("grid must look like a:b:n")
    if n < 1:
        raise DomainError("grid needs n >= 1")
    if n == 1:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def _int_list(s: str):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of integers")


# -- commands --------------------------------------------------------------------

def _ctx(args) -> PrecisionContext:
    return PrecisionContext(args.prec)


def cmd_moment(args):
    from .moments import (
        exact_moment_sequence,
        m0_exact,
        m0_hyp,
        m2_hyp,
        moment_real,
        moment_real_halfint,
        moment_real_quadrature,
        moment_sequence_recurrence,
    )

    ctx = _ctx(args)
    N, p = args.N, args.p
    if args.exact:
        if not isinstance(p, Fraction) or p.denominator != 1 or p < 0:
            raise DomainError("--exact needs a nonnegative integer p")
        k = int(p)
        if k == 0:
            v = m0_exact(N)
            meta = {}
        else:
            seq = exact_moment_sequence(N, max(k, 2))
            v, meta = seq[k].value, seq[k].meta
        return _record(args, [{"name": "M_2p", "a": _q(v.a), "b": _q(v.b),
                               **_ball(v.to_ball(args.prec + 32), args.prec)}],
                       "exact-sum" if k == 0 else "recurrence",
                       recognized=bool(meta.get("recognized", False)))
    if args.method == "quad":
        mv = moment_real_quadrature(N, p, ctx)
    elif args.method == "rec":
        if not isinstance(p, Fraction) or p.denominator != 1 or p < 0:
            raise DomainError("the recurrence route needs a nonnegative integer p")
        k = int(p)
        wctx = ctx.extended(2 * k + 16)
        seq = moment_sequence_recurrence(N, max(k, 2), m0_hyp(N, wctx), m2_hyp(N, wctx))
        mv = seq[k]
    elif isinstance(p, Fraction) and p.denominator == 2 and p > 0:
        mv = moment_real_halfint(N, int(p - Fraction(1, 2)), ctx)
    else:
        mv = moment_real(N, p, ctx)
    return _record(args, [_ball(mv.ball(), args.prec, name="M_2p")], mv.method.value)


def cmd_m0(args):
    from .moments import m0_exact, m0_hyp

    if args.exact:
        v = m0_exact(args.N)
        return _record(args, [{"name": "M_0", "a": _q(v.a), "b": _q(v.b),
                               **_ball(v.to_ball(args.prec + 32), args.prec)}], "exact-sum")
    mv = m0_hyp(args.N, _ctx(args))
    return _record(args, [_ball(mv.ball(), args.prec, name="M_0")], mv.method.value)


def cmd_density(args):
    from .density import ode_residual_density, rho_real, rho_real_derivatives

    ctx = _ctx(args)
    if (args.x is None) == (args.grid is None):
        raise DomainError("give exactly one of --x and --grid")
    values = []
    if args.grid is not None:
        for x in _grid(args.grid):
            values.append(_ball(rho_real(args.N, x, ctx), args.prec, name="rho", x=_q(x)))
        return _record(args, values, "closed-form")
    x = args.x
    if args.derivs:
        pt = rho_real_derivatives(args.N, x, ctx)
        values.append(_ball(pt.rho, args.prec, name="rho", x=_q(x)))
        for k, d in enumerate(pt.derivs, 1):
            values.append(_ball(d, args.prec, name="rho" + "'" * k, x=_q(x)))
    else:
        values.append(_ball(rho_real(args.N, x, ctx), args.prec, name="rho", x=_q(x)))
    if args.ode_residual:
        values.append(_ball(ode_residual_density(args.N, x, ctx), args.prec,
                            name="ode_residual", x=_q(x)))
    return _record(args, values, "closed-form")


def cmd_mgf(args):
    from .transforms import mgf_ode_residual, mgf_value

    ctx = _ctx(args)
    v = mgf_value(args.N, args.t, args.derivs, ctx)
    values = [_ball(v.value, args.prec, name="u", t=_q(args.t))]
    for k, d in enumerate(v.derivs, 1):
        values.append(_ball(d, args.prec, name=f"u^({k})", t=_q(args.t)))
    if args.ode_residual:
        values.append(_ball(mgf_ode_residual(args.N, args.t, ctx), args.prec,
                            name="ode_residual", t=_q(args.t)))
    return _record(args, values, "moment-series")


def cmd_stieltjes(args):
    from .transforms import stieltjes_ode_residual, stieltjes_value

    ctx = _ctx(args)
    v = stieltjes_value(args.N, args.t, args.derivs, ctx)
    values = [_ball(v.value, args.prec, name="W")]
    for k, d in enumerate(v.derivs, 1):
        values.append(_ball(d, args.prec, name=f"W^({k})"))
    if args.ode_residual:
        values.append(_ball(stieltjes_ode_residual(args.N, args.t, ctx), args.prec,
                            name="ode_residual"))
    return _record(args, values, "quadrature")


def cmd_asymp(args):
    from .asymptotics import a_coefficients, b_coefficients, moment_asymptotic

    if args.which in ("a", "b"):
        cs = (a_coefficients if args.which == "a" else b_coefficients)(args.m)
        values = [{"name": f"{args.which}_{l}", "value": _q(c)} for l, c in enumerate(cs, 1)]
        return _record(args, values, "large-parameter-2f1", exact=[_q(c) for c in cs])
    if args.N is None or args.p is None:
        raise DomainError("asymp moment needs --N and --p")
    s, v = moment_asymptotic(args.N, args.p, args.m, ctx=_ctx(args))
    values = [_ball(v, args.prec, name="M_2p_asymptotic")]
    values += [{"name": f"b_{l},{args.p}", "value": _q(c)}
               for l, c in enumerate(s.half_power_coeffs)]
    values += [{"name": f"c_{l},{args.p}", "value": _q(c)}
               for l, c in enumerate(s.int_power_coeffs)]
    return _record(args, values, "asymptotic-series",
                   note="the value is the truncated series, not an enclosure of M_2p")


def _level_name(k) -> str:
    return _q(k)


def _poly_dict(p) -> dict:
    return {str(d): _q(c) for d, c in sorted(p.coeffs.items())}


def cmd_mgf_series(args):
    from .asymptotics import mgf_expansion_levels

    levels = mgf_expansion_levels(args.kmax)
    values = []
    for k in range(args.kmax + 1):
        for lvl in ((Fraction(k),) + ((Fraction(2 * k + 1, 2),) if k < args.kmax else ())):
            u = levels.level(lvl)
            values.append({"name": f"u_({_level_name(lvl)})", "level": _level_name(lvl),
                           "prefactor": u.prefactor.value, "sinh": _poly_dict(u.P),
                           "cosh": _poly_dict(u.Q), "value": str(u)})
    return _record(args, values, "ode-levels")


def cmd_stieltjes_series(args):
    from .asymptotics import stieltjes_expansion_levels

    levels = stieltjes_expansion_levels(args.kmax)
    values = []
    for lv in levels:
        values.append({
            "name": f"W_({_level_name(lv.level)})",
            "level": _level_name(lv.level),
            "unit": lv.unit.value,
            "log_coeff": _q(lv.log_coeff),
            "poles": {f"{x0}^{j}": _q(c) for (x0, j), c in sorted(lv.poles.items())},
            "decay_order": lv.decay_order(),
            "value": str(lv),
        })
    return _record(args, values, "ode-levels")


def cmd_mc(args):
    from .moments import m0_exact, moment_real, trace_moment
    from .montecarlo import MCConfig, dump_samples, empirical_real_moments, empirical_trace_moments

    seed = args.seed if args.seed is not None else 0
    cfg = MCConfig(args.N, args.samples, seed=seed, workers=args.workers,
                   realness_mode=args.realness)
    p_list = args.p_list
    if args.trace:
        s = empirical_trace_moments(cfg, p_list)
        exact = {p: trace_moment(args.N, p) for p in p_list if p >= 1}
    else:
        s = empirical_real_moments(cfg, p_list)
        exact = {}
        for p in p_list:
            exact[p] = (m0_exact(args.N).to_mpf(64) if p == 0
                        else moment_real(args.N, p).value.mid)
    values = []
    for p in p_list:
        row = {"name": "trace_moment" if args.trace else "M_2p", "p": p,
               "value": repr(s.means[p]), "err": repr(s.std_errors[p])}
        if p in exact:
            row["exact"] = mpmath.nstr(mpmath.mpf(exact[p]), 17)
            row["z"] = repr((s.means[p] - float(exact[p])) / s.std_errors[p])
        values.append(row)
    if args.dump:
        dump_samples(cfg, args.dump)
    hist = {str(k): v for k, v in sorted(s.count_histogram.items())}
    return _record(args, values, "monte-carlo", backend=s.backend, n_failed=s.n_failed,
                   failed_ids=list(s.failed_ids), parity_ok=s.parity_ok, count_histogram=hist)


def cmd_verify(args):
    from .verify import run_checks

    seed = args.seed if args.seed is not None else 0
    results = run_checks(full=args.full, seed=seed)
    values = [{"name": r.name, "value": "pass" if r.passed else "FAIL",
               "detail": r.detail, "seconds": f"{r.seconds:.2f}"} for r in results]
    rec = _record(args, values, "invariant-suite",
                  passed=all(r.passed for r in results))
    return rec


# -- parser -------------------------------------------------------------------------

def _globals(parser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--prec", type=int, default=d(128), help="precision in bits (default 128)")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=d("json"))
    parser.add_argument("--seed", type=int, default=d(None), help="seed for Monte Carlo runs")
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ginoe-moments",
                                     description="Real-eigenvalue moments of the real Ginibre ensemble.")
    _globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("moment", cmd_moment, "M_2p for one N and p")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--p", type=_param, required=True, help="rational (3/2) or complex (1+2j)")
    sp.add_argument("--exact", action="store_true", help="exact a + b sqrt(2) for integer p")
    sp.add_argument("--method", choices=("hyp", "rec", "quad"), default="hyp")

    sp = add("m0", cmd_m0, "expected number of real eigenvalues")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--exact", action="store_true")

    sp = add("density", cmd_density, "density of real eigenvalues")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--x", type=_fraction)
    sp.add_argument("--grid", help="a:b:n, n equally spaced points (write --grid=-1:1:5 "
                                   "when a is negative)")
    sp.add_argument("--derivs", action="store_true", help="also rho', rho'', rho'''")
    sp.add_argument("--ode-residual", action="store_true")

    sp = add("mgf", cmd_mgf, "moment generating function u(t)")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--t", type=_fraction, required=True)
    sp.add_argument("--derivs", type=int, default=0)
    sp.add_argument("--ode-residual", action="store_true")

    sp = add("stieltjes", cmd_stieltjes, "Stieltjes transform W(t), Im t != 0")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--t", type=_complex, required=True, help="complex, e.g. 1+2j")
    sp.add_argument("--derivs", type=int, default=0)
    sp.add_argument("--ode-residual", action="store_true")

    sp = add("asymp", cmd_asymp, "large-N expansion coefficients")
    sp.add_argument("which", choices=("a", "b", "moment"))
    sp.add_argument("--m", type=int, required=True, help="number of terms")
    sp.add_argument("--N", type=int)
    sp.add_argument("--p", type=int)

    sp = add("mgf-series", cmd_mgf_series, "sinh/cosh levels of the rescaled MGF")
    sp.add_argument("--kmax", type=int, required=True)

    sp = add("stieltjes-series", cmd_stieltjes_series, "levels of the rescaled Stieltjes transform")
    sp.add_argument("--kmax", type=int, required=True)

    sp = add("mc", cmd_mc, "Monte Carlo estimates")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--p-list", type=_int_list, default=[0, 1, 2])
    sp.add_argument("--trace", action="store_true", help="trace moments instead of real ones")
    sp.add_argument("--realness", choices=("schur-blocks", "imag-threshold"),
                    default="schur-blocks")
    sp.add_argument("--dump", help="write one JSON line per sample to this file")

    sp = add("verify", cmd_verify, "run the invariant suites")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--quick", action="store_true", default=True)
    g.add_argument("--full", action="store_true")
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, InternalInconsistencyError):
        return EXIT_INTERNAL
    if isinstance(exc, GinoeError):
        return getattr(exc, "exit_code", EXIT_DOMAIN)
    return EXIT_DOMAIN


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")
    if args.prec < 32:
        parser.error("--prec must be at least 32")
    try:
        rec = args.func(args)
    except (GinoeError, ValueError) as exc:
        code = _exit_code(exc)
        err = {"command": args.command, "error": type(exc).__name__, "message": str(exc),
               "exit_code": code}
        print(json.dumps(err), file=sys.stdout)
        log.error("%s: %s", type(exc).__name__, exc)
        return code
    print(render(rec, args.format))
    if args.command == "verify" and not rec["passed"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
