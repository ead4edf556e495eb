"""Pure-Python sampling kernel.

The compiled kernel in ``_kernel.pyx`` performs the same floating-point
operations in the same order, so both produce bit-identical samples.

Stream: Philox4x64-10 keyed by (seed, sample id), counter (block, 0, 0, 0).
Each block gives four 64-bit words, turned into uniforms on (0, 1) and then
into two Box-Muller pairs. Matrices are filled row-major.

Eigenvalues: power-of-two balancing, Gaussian-elimination Hessenberg
reduction, and the Francis double-shift QR iteration. A 1x1 deflated block
reports wi == 0 exactly, which is how real eigenvalues are classified.
"""
from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
PHILOX_M0 = 0xD2E7470EE14C6C93
PHILOX_M1 = 0xCA5A826395121157
PHILOX_W0 = 0x9E3779B97F4A7C15
PHILOX_W1 = 0xBB67AE8584CAA73B
TWO_PI = 6.283185307179586
INV_2_53 = 1.0 / 9007199254740992.0
EPS = 2.220446049250313e-16
MAX_ITS = 30

BACKEND = "python"


class QRFailure(ArithmeticError):
    pass


def philox4x64(ctr, key):
    x0, x1, x2, x3 = ctr
    k0, k1 = key
    for r in range(10):
        if r:
            k0 = (k0 + PHILOX_W0) & MASK64
            k1 = (k1 + PHILOX_W1) & MASK64
        p0 = PHILOX_M0 * x0
        p1 = PHILOX_M1 * x2
        x0, x1, x2, x3 = ((p1 >> 64) ^ x1 ^ k0, p1 & MASK64,
                          (p0 >> 64) ^ x3 ^ k1, p0 & MASK64)
    return x0, x1, x2, x3


def _uniform(w: int) -> float:
    return ((w >> 11) + 0.5) * INV_2_53


def gaussians(seed: int, sample_id: int, n: int) -> list:
    """First n standard normals of the (seed, sample_id) substream."""
    key = (seed & MASK64, sample_id & MASK64)
    out = []
    block = 0
    while len(out) < n:
        w = philox4x64((block, 0, 0, 0), key)
        block += 1
        for i in (0, 2):
            u1 = _uniform(w[i])
            u2 = _uniform(w[i + 1])
            r = math.sqrt(-2.0 * math.log(u1))
            th = TWO_PI * u2
            out.append(r * math.cos(th))
            out.append(r * math.sin(th))
    return out[:n]


def ginoe_matrix(N: int, seed: int, sample_id: int) -> list:
    g = gaussians(seed, sample_id, N * N)
    return [g[i * N:(i + 1) * N] for i in range(N)]


# -- eigenvalues, 1-based work arrays --------------------------------------------------

def _balance(a, n):
    done = False
    while not done:
        done = True
        for i in range(1, n + 1):
            r = 0.0
            c = 0.0
            for j in range(1, n + 1):
                if j != i:
                    c += abs(a[j][i])
                    r += abs(a[i][j])
            if c != 0.0 and r != 0.0:
                g = r / 2.0
                f = 1.0
                s = c + r
                while c < g:
                    f *= 2.0
                    c *= 4.0
                g = r * 2.0
                while c > g:
                    f /= 2.0
                    c /= 4.0
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    for j in range(1, n + 1):
                        a[i][j] *= g
                    for j in range(1, n + 1):
                        a[j][i] *= f


def _elmhes(a, n):
    for m in range(2, n):
        x = 0.0
        i = m
        for j in range(m, n + 1):
            if abs(a[j][m - 1]) > abs(x):
                x = a[j][m - 1]
                i = j
        if i != m:
            for j in range(m - 1, n + 1):
                a[i][j], a[m][j] = a[m][j], a[i][j]
            for j in range(1, n + 1):
                a[j][i], a[j][m] = a[j][m], a[j][i]
        if x != 0.0:
            for i in range(m + 1, n + 1):
                y = a[i][m - 1]
                if y != 0.0:
                    y /= x
                    a[i][m - 1] = y
                    for j in range(m, n + 1):
                        a[i][j] -= y * a[m][j]
                    for j in range(1, n + 1):
                        a[j][m] += y * a[j][i]
    for i in range(3, n + 1):
        for j in range(1, i - 1):
            a[i][j] = 0.0


def _sign(a, b):
    return abs(a) if b >= 0.0 else -abs(a)


def _hqr(a, n, wr, wi):
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i][j])
    # exceptional shifts every 10 iterations; cap as in LAPACK's dhseqr
    max_its = MAX_ITS * max(10, n)
    nn = n
    t = 0.0
    x = y = z = w = p = q = r = s = 0.0
    while nn >= 1:
        its = 0
        while True:
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(a[ll - 1][ll - 1]) + abs(a[ll][ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll][ll - 1]) <= EPS * s:
                    a[ll][ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn][nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
            else:
                y = a[nn - 1][nn - 1]
                w = a[nn][nn - 1] * a[nn - 1][nn]
                if l == nn - 1:
                    p = 0.5 * (y - x)
                    q = p * p + w
                    z = math.sqrt(abs(q))
                    x += t
                    if q >= 0.0:
                        z = p + _sign(z, p)
                        wr[nn - 1] = wr[nn] = x + z
                        if z != 0.0:
                            wr[nn] = x - w / z
                        wi[nn - 1] = wi[nn] = 0.0
                    else:
                        wr[nn - 1] = wr[nn] = x + p
                        wi[nn] = z
                        wi[nn - 1] = -z
                    nn -= 2
                else:
                    if its == max_its:
                        raise QRFailure("Francis QR did not converge")
                    if its and its % 10 == 0:
                        t += x
                        for i in range(1, nn + 1):
                            a[i][i] -= x
                        s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
                        x = 0.75 * s
                        y = x
                        w = -0.4375 * s * s
                    its += 1
                    m = nn - 2
                    while m >= l:
                        z = a[m][m]
                        r = x - z
                        s = y - z
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1]
                        q = a[m + 1][m + 1] - z - r - s
                        r = a[m + 2][m + 1]
                        s = abs(p) + abs(q) + abs(r)
                        p /= s
                        q /= s
                        r /= s
                        if m == l:
                            break
                        u = abs(a[m][m - 1]) * (abs(q) + abs(r))
                        v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
                        if u <= EPS * v:
                            break
                        m -= 1
                    for i in range(m + 2, nn + 1):
                        a[i][i - 2] = 0.0
                        if i != m + 2:
                            a[i][i - 3] = 0.0
                    k = m
                    while k <= nn - 1:
                        if k != m:
                            p = a[k][k - 1]
                            q = a[k + 1][k - 1]
                            r = 0.0
                            if k != nn - 1:
                                r = a[k + 2][k - 1]
                            x = abs(p) + abs(q) + abs(r)
                            if x != 0.0:
                                p /= x
                                q /= x
                                r /= x
                        s = _sign(math.sqrt(p * p + q * q + r * r), p)
                        if s != 0.0:
                            if k == m:
                                if l != m:
                                    a[k][k - 1] = -a[k][k - 1]
                            else:
                                a[k][k - 1] = -s * x
                            p += s
                            x = p / s
                            y = q / s
                            z = r / s
                            q /= p
                            r /= p
                            for j in range(k, nn + 1):
                                p = a[k][j] + q * a[k + 1][j]
                                if k != nn - 1:
                                    p += r * a[k + 2][j]
                                    a[k + 2][j] -= p * z
                                a[k + 1][j] -= p * y
                                a[k][j] -= p * x
                            mmin = nn if nn < k + 3 else k + 3
                            for i in range(l, mmin + 1):
                                p = x * a[i][k] + y * a[i][k + 1]
                                if k != nn - 1:
                                    p += z * a[i][k + 2]
                                    a[i][k + 2] -= p * r
                                a[i][k + 1] -= p * q
                                a[i][k] -= p
                        k += 1
            if not (l < nn - 1):
                break


def eigenvalues(matrix) -> tuple:
    """(wr, wi) of a square real matrix; wi[j] == 0.0 marks a real eigenvalue."""
    n = len(matrix)
    a = [[0.0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        row = matrix[i]
        if len(row) != n:
            raise ValueError("matrix must be square")
        for j in range(n):
            a[i + 1][j + 1] = float(row[j])
    wr = [0.0] * (n + 1)
    wi = [0.0] * (n + 1)
    _balance(a, n)
    _elmhes(a, n)
    _hqr(a, n, wr, wi)
    return wr[1:], wi[1:]


def _sample_stats(wr, wi, powers):
    """Per-sample sums: real count, sum x^e over real x, sum Re(lam^e) over all lam."""
    reals = [wr[j] for j in range(len(wr)) if wi[j] == 0.0]
    rs = []
    ts = []
    for e in powers:
        acc = 0.0
        for x in reals:
            acc += math.pow(x, e)
        rs.append(acc)
        acc = 0.0
        for j in range(len(wr)):
            a, b = 1.0, 0.0
            x, y = wr[j], wi[j]
            for _ in range(e):
                a, b = a * x - b * y, a * y + b * x
            acc += a
        ts.append(acc)
    return reals, rs, ts


def run_block(N: int, seed: int, start: int, count: int, powers, keep_reals: bool = False):
    """Simulate samples start..start+count-1.

    Returns (n_real, real_sums, trace_sums, failed, reals) where the sums are
    per-sample lists indexed like ``powers`` and ``failed`` lists sample ids
    whose QR iteration did not converge (their rows are NaN).
    """
    powers = [int(e) for e in powers]
    n_real = []
    real_sums = []
    trace_sums = []
    failed = []
    kept = []
    nan = float("nan")
    for sid in range(start, start + count):
        mat = ginoe_matrix(N, seed, sid)
        try:
            wr, wi = eigenvalues(mat)
        except QRFailure:
            failed.append(sid)
            n_real.append(-1)
            real_sums.append([nan] * len(powers))
            trace_sums.append([nan] * len(powers))
            if keep_reals:
                kept.append([])
            continue
        reals, rs, ts = _sample_stats(wr, wi, powers)
        n_real.append(len(reals))
        real_sums.append(rs)
        trace_sums.append(ts)
        if keep_reals:
            kept.append(reals)
    return n_real, real_sums, trace_sums, failed, kept
