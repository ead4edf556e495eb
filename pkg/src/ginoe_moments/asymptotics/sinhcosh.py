"""Large-N levels of the rescaled moment generating function.

With u~(t) = N^(-1/2) u(t/sqrt(N)) the fourth-order MGF equation becomes
(D0 + D1/N + D2/N^2) u~ = 0, and u~ = sum_k u~_(k) N^-k + u~_(k+1/2) N^-(k+1/2).
Every level is an even function P(t) sinh t + Q(t) cosh t with P odd and Q
even (P may carry a t^-1 term at level 0). The derivative acts on the pair as
(P, Q) -> (P' + Q, Q' + P), so applying a differential operator with
polynomial coefficients stays inside this class and each level is found by an
exact linear solve.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import DomainError, InternalInconsistencyError
from ..numerics import ball
from ..numerics.ball import BigReal
from ..polynomials import LaurentPoly
from .coefficients import a_with_leading, b_with_leading

ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
T = LaurentPoly.monomial(1)


def _lp(d: dict) -> LaurentPoly:
    return LaurentPoly(d)


class DiffOperator:
    """sum_j c_j(t) d^j/dt^j with Laurent-polynomial coefficients c_j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [c if isinstance(c, LaurentPoly) else LaurentPoly.const(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: DiffOperator) -> DiffOperator:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return DiffOperator([x + y for x, y in zip(a, b)])

    def __mul__(self, c) -> DiffOperator:
        return DiffOperator([x * c for x in self.coeffs])

    __rmul__ = __mul__

    def compose(self, other: DiffOperator) -> DiffOperator:
        """(self o other) f = self[other[f]], via Leibniz on each coefficient."""
        out = [ZERO] * (self.order + other.order + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                bm = b
                for m in range(i + 1):
                    out[i - m + j] = out[i - m + j] + a * bm * math.comb(i, m)
                    bm = bm.derivative()
        return DiffOperator(out)

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.coeffs == other.coeffs

    def __repr__(self):
        return " + ".join(f"({c})d^{j}" for j, c in enumerate(self.coeffs) if not c.is_zero())


# u~ operators; indices are derivative orders
D0 = DiffOperator([_lp({1: 2}), -8, _lp({1: -4}), 8, _lp({1: 2})])
D1 = DiffOperator([T, _lp({2: 3, 0: -8}), _lp({1: -13}), _lp({2: -3})])
D2 = DiffOperator([ZERO, _lp({2: 2}), _lp({3: 1})])


def d0_factorizations() -> tuple:
    """The two factored forms of D0 as composed operators."""
    inner = DiffOperator([-1, 0, 1])
    left = DiffOperator([_lp({1: -1}), 4, T]).compose(inner) * 2
    right = inner.compose(DiffOperator([_lp({1: -1}), 2, T])) * 2
    return left, right


class Prefactor(enum.Enum):
    SQRT_2_OVER_PI = "sqrt(2/pi)"
    INV_SQRT_2PI = "1/sqrt(2 pi)"
    ONE = "1"

    def ball(self) -> BigReal:
        if self is Prefactor.ONE:
            return BigReal(1)
        if self is Prefactor.INV_SQRT_2PI:
            return 1 / ball.sqrt(2 * ball.pi())
        return ball.sqrt(2 / ball.pi())


def _sinh_coeff(m: int) -> Fraction:
    return Fraction(1, math.factorial(m)) if m >= 1 and m % 2 else Fraction(0)


def _cosh_coeff(m: int) -> Fraction:
    return Fraction(1, math.factorial(m)) if m >= 0 and m % 2 == 0 else Fraction(0)


@dataclass(frozen=True)
class SinhCoshPoly:
    """prefactor * (P(t) sinh t + Q(t) cosh t).

    For integer levels the conventional split is A t sinh t + B cosh t + s sinh(t)/t
    (A = P/t with the t^-1 part moved into s, B = Q). For half-integer levels
    it is A t cosh t + B sinh t (A = Q/t, B = P).
    """

    P: LaurentPoly
    Q: LaurentPoly
    prefactor: Prefactor = Prefactor.SQRT_2_OVER_PI
    half_integer: bool = False

    @property
    def s(self) -> Fraction:
        return Fraction(0) if self.half_integer else self.P[-1]

    @property
    def A(self) -> LaurentPoly:
        if self.half_integer:
            return self.Q.shift(-1)
        return (self.P - LaurentPoly.monomial(-1, self.s)).shift(-1)

    @property
    def B(self) -> LaurentPoly:
        return self.P if self.half_integer else self.Q

    def derivative(self) -> SinhCoshPoly:
        return SinhCoshPoly(self.P.derivative() + self.Q, self.Q.derivative() + self.P,
                            self.prefactor, self.half_integer)

    def scale(self, c) -> SinhCoshPoly:
        return SinhCoshPoly(self.P * c, self.Q * c, self.prefactor, self.half_integer)

    def __add__(self, other: SinhCoshPoly) -> SinhCoshPoly:
        if self.prefactor is not other.prefactor:
            raise DomainError("cannot add levels with different prefactors")
        return SinhCoshPoly(self.P + other.P, self.Q + other.Q, self.prefactor,
                            self.half_integer)

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Q.is_zero()

    def apply(self, op: DiffOperator) -> SinhCoshPoly:
        out_p, out_q = ZERO, ZERO
        cur = self
        for c in op.coeffs:
            out_p = out_p + c * cur.P
            out_q = out_q + c * cur.Q
            cur = cur.derivative()
        return SinhCoshPoly(out_p, out_q, self.prefactor, self.half_integer)

    def taylor_coefficient(self, n: int) -> Fraction:
        """[t^n] of P sinh + Q cosh, without the prefactor."""
        total = Fraction(0)
        for i, c in self.P.coeffs.items():
            total += c * _sinh_coeff(n - i)
        for i, c in self.Q.coeffs.items():
            total += c * _cosh_coeff(n - i)
        return total

    def derivative_at_zero(self, n: int) -> Fraction:
        """n-th derivative at 0 in units of the prefactor."""
        return self.taylor_coefficient(n) * math.factorial(n)

    def evaluate(self, t) -> BigReal:
        tb = BigReal.coerce(t)
        e, ei = ball.exp(tb), ball.exp(-tb)
        sh, ch = (e - ei) / 2, (e + ei) / 2
        return self.prefactor.ball() * (self.P.eval(tb) * sh + self.Q.eval(tb) * ch)

    def __eq__(self, other):
        if not isinstance(other, SinhCoshPoly):
            return NotImplemented
        return (self.P, self.Q, self.prefactor, self.half_integer) == (
            other.P, other.Q, other.prefactor, other.half_integer)

    def __hash__(self):
        return hash((self.P, self.Q, self.prefactor, self.half_integer))

    def __repr__(self):
        pre = "" if self.prefactor is Prefactor.ONE else f"{self.prefactor.value}*"
        return f"{pre}[({self.P}) sinh t + ({self.Q}) cosh t]"


def _solve_exact(rows: list, rhs: list, n: int) -> list:
    """Unique solution of an over-determined exact system, else raise."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if r < n:
        raise InternalInconsistencyError("level solve left free variables")
    if any(row[n] != 0 for row in m[r:]):
        raise InternalInconsistencyError("level solve is inconsistent")
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = m[i][n]
    return x


def _solve_level(target: SinhCoshPoly, k: int, value_at_zero: Fraction,
                 prefactor: Prefactor, half: bool) -> SinhCoshPoly:
    """Solve D0 f = target with P odd (deg <= 2k+3), Q even (deg <= 2k+2), Q(0) pinned."""
    basis = [("P", i) for i in range(1, 2 * k + 4, 2)] + [("Q", j) for j in range(0, 2 * k + 3, 2)]
    images = []
    for kind, d in basis:
        mono = LaurentPoly.monomial(d)
        f = SinhCoshPoly(mono, ZERO) if kind == "P" else SinhCoshPoly(ZERO, mono)
        images.append(f.apply(D0))
    keys = set(target.P.coeffs) | set(target.Q.coeffs)
    for g in images:
        keys |= set(g.P.coeffs) | set(g.Q.coeffs)
    rows, rhs = [], []
    for deg in sorted(keys):
        rows.append([g.P[deg] for g in images])
        rhs.append(target.P[deg])
        rows.append([g.Q[deg] for g in images])
        rhs.append(target.Q[deg])
    # pin the cosh kernel through Q(0)
    rows.append([Fraction(1) if b == ("Q", 0) else Fraction(0) for b in basis])
    rhs.append(value_at_zero)
    x = _solve_exact(rows, rhs, len(basis))
    P = LaurentPoly({d: v for (kind, d), v in zip(basis, x) if kind == "P"})
    Q = LaurentPoly({d: v for (kind, d), v in zip(basis, x) if kind == "Q"})
    return SinhCoshPoly(P, Q, prefactor, half)


def _residual(levels: list, k: int) -> SinhCoshPoly:
    f = levels[k].apply(D0)
    if k >= 1:
        f = f + levels[k - 1].apply(D1)
    if k >= 2:
        f = f + levels[k - 2].apply(D2)
    return f


@dataclass(frozen=True)
class MGFLevels:
    integer: tuple   # u~_(0), u~_(1), ...
    half: tuple      # u~_(1/2), u~_(3/2), ...

    @property
    def k_max(self) -> int:
        return len(self.integer) - 1

    def level(self, k) -> SinhCoshPoly:
        q = Fraction(k)
        if q.denominator == 1:
            return self.integer[int(q)]
        if q.denominator == 2:
            return self.half[int(q - Fraction(1, 2))]
        raise DomainError("levels are integers or half-integers")


@lru_cache(maxsize=8)
def mgf_expansion_levels(k_max: int) -> MGFLevels:
    """u~_(0..k_max) and u~_(1/2..k_max+1/2) as exact SinhCoshPoly objects.

    Integer levels are pinned by u~_(k)(0) = sqrt(2/pi) a_k; the second
    derivative is then checked against sqrt(2/pi) b_k. Half-integer levels
    are pinned by u~(0) = 0 and must have vanishing even derivatives of order
    up to 2k at 0.
    """
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    a = a_with_leading(k_max + 2)
    b = b_with_leading(k_max + 2)
    ints = [SinhCoshPoly(LaurentPoly.monomial(-1), ZERO)]
    halves = [SinhCoshPoly(ZERO, LaurentPoly.const(Fraction(1, 2)), Prefactor.ONE, True)]
    for k in range(1, k_max + 1):
        tgt = SinhCoshPoly(ZERO, ZERO)
        tgt = tgt + ints[k - 1].apply(D1).scale(-1)
        if k >= 2:
            tgt = tgt + ints[k - 2].apply(D2).scale(-1)
        lev = _solve_level(tgt, k, a[k], Prefactor.SQRT_2_OVER_PI, False)
        if lev.derivative_at_zero(2) != b[k]:
            raise InternalInconsistencyError(
                f"level {k}: second derivative {lev.derivative_at_zero(2)} != b_{k} = {b[k]}")
        ints.append(lev)

        htgt = SinhCoshPoly(ZERO, ZERO, Prefactor.ONE, True)
        htgt = htgt + halves[k - 1].apply(D1).scale(-1)
        if k >= 2:
            htgt = htgt + halves[k - 2].apply(D2).scale(-1)
        hl = _solve_level(htgt, k, Fraction(0), Prefactor.ONE, True)
        for j in range(k + 1):
            if hl.derivative_at_zero(2 * j) != 0:
                raise InternalInconsistencyError(
                    f"level {k}+1/2: derivative of order {2 * j} at 0 does not vanish")
        halves.append(hl)
    levels = MGFLevels(tuple(ints), tuple(halves))
    for chain in (levels.integer, levels.half):
        for k in range(len(chain)):
            if not _residual(list(chain), k).is_zero():
                raise InternalInconsistencyError(f"operator identity fails at level {k}")
    return levels


@dataclass(frozen=True)
class DistributionalLevel:
    """r_(k)(x) = prefactor * (slab on (-1, 1) + sum c delta^(j)(x -+ 1)).

    ``atoms`` maps (x0, j) to the coefficient of delta^(j)(x - x0), x0 = +-1.
    """

    level: Fraction
    prefactor: Prefactor
    slab: Fraction
    atoms: dict
    polynomials: SinhCoshPoly

    def mass(self) -> Fraction:
        """Total mass in prefactor units (delta derivatives carry none)."""
        return 2 * self.slab + sum(c for (x0, j), c in self.atoms.items() if j == 0)

    def mgf(self) -> SinhCoshPoly:
        """int e^(tx) r(x) dx, rebuilt from the distributional data."""
        P = LaurentPoly.monomial(-1, self.slab * 2) if self.slab else ZERO
        Q = ZERO
        for (x0, j), c in self.atoms.items():
            # int e^(tx) delta^(j)(x - x0) dx = (-t)^j e^(t x0)
            w = c * (-1) ** j
            mono = LaurentPoly.monomial(j, w)
            # e^(+-t) = cosh t +- sinh t
            Q = Q + mono
            P = P + mono * x0
        return SinhCoshPoly(P, Q, self.prefactor, self.polynomials.half_integer)


def density_correction_polynomials(k, levels: MGFLevels | None = None) -> DistributionalLevel:
    """Distributional density correction r_(k) of the rescaled real density."""
    q = Fraction(k)
    if q < 0 or q.denominator not in (1, 2):
        raise DomainError("k must be a nonnegative integer or half-integer")
    if levels is None or q > levels.k_max + 1:
        levels = mgf_expansion_levels(int(q) + 1)
    lev = levels.level(q)
    slab = lev.P[-1] / 2
    atoms = {}
    # t^j sinh t -> (delta_1 - delta_-1)/2, t^j cosh t -> (delta_1 + delta_-1)/2, each with
    # t^j coming from (-d/dx)^j, i.e. a factor (-1)^j on delta^(j)
    for j, c in lev.P.coeffs.items():
        if j < 0:
            continue
        s = (-1) ** j * c / 2
        atoms[(1, j)] = atoms.get((1, j), 0) + s
        atoms[(-1, j)] = atoms.get((-1, j), 0) - s
    for j, c in lev.Q.coeffs.items():
        s = (-1) ** j * c / 2
        atoms[(1, j)] = atoms.get((1, j), 0) + s
        atoms[(-1, j)] = atoms.get((-1, j), 0) + s
    atoms = {key: Fraction(v) for key, v in atoms.items() if v}
    return DistributionalLevel(q, lev.prefactor, slab, atoms, lev)
