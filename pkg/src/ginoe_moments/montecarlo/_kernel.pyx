# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernel; mirrors _pykernel operation for operation."""
from libc.math cimport sqrt, log, cos, sin, fabs, pow
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline void ginoe_mulhilo(unsigned long long a, unsigned long long b,
                                     unsigned long long *hi, unsigned long long *lo) {
        unsigned __int128 p = (unsigned __int128)a * b;
        *hi = (unsigned long long)(p >> 64);
        *lo = (unsigned long long)p;
    }
    """
    void ginoe_mulhilo(unsigned long long a, unsigned long long b,
                       unsigned long long *hi, unsigned long long *lo) nogil

BACKEND = "cython"

cdef uint64_t M0 = 0xD2E7470EE14C6C93ULL
cdef uint64_t M1 = 0xCA5A826395121157ULL
cdef uint64_t W0 = 0x9E3779B97F4A7C15ULL
cdef uint64_t W1 = 0xBB67AE8584CAA73BULL
cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef double EPS = 2.220446049250313e-16
cdef int MAX_ITS = 30


class QRFailure(ArithmeticError):
    pass


cdef inline void _philox(uint64_t *x, uint64_t k0, uint64_t k1) noexcept nogil:
    cdef unsigned long long hi0, lo0, hi1, lo1
    cdef int r
    cdef uint64_t x0 = x[0], x1 = x[1], x2 = x[2], x3 = x[3]
    for r in range(10):
        if r:
            k0 += W0
            k1 += W1
        ginoe_mulhilo(M0, x0, &hi0, &lo0)
        ginoe_mulhilo(M1, x2, &hi1, &lo1)
        x0 = hi1 ^ x1 ^ k0
        x1 = lo1
        x2 = hi0 ^ x3 ^ k1
        x3 = lo0
    x[0] = x0
    x[1] = x1
    x[2] = x2
    x[3] = x3


def philox4x64(ctr, key):
    cdef uint64_t x[4]
    x[0], x[1], x[2], x[3] = ctr
    _philox(x, key[0], key[1])
    return x[0], x[1], x[2], x[3]


cdef inline double _uniform(uint64_t w) noexcept nogil:
    return (<double>(w >> 11) + 0.5) * INV_2_53


cdef void _gaussians(uint64_t seed, uint64_t sid, int n, double *out) noexcept nogil:
    cdef uint64_t x[4]
    cdef uint64_t block = 0
    cdef int filled = 0, i
    cdef double u1, u2, r, th
    while filled < n:
        x[0] = block
        x[1] = 0
        x[2] = 0
        x[3] = 0
        _philox(x, seed, sid)
        block += 1
        for i in range(0, 4, 2):
            u1 = _uniform(x[i])
            u2 = _uniform(x[i + 1])
            r = sqrt(-2.0 * log(u1))
            th = TWO_PI * u2
            if filled < n:
                out[filled] = r * cos(th)
            filled += 1
            if filled < n:
                out[filled] = r * sin(th)
            filled += 1


def gaussians(seed, sample_id, int n):
    cdef double *buf = <double *> malloc(max(n, 1) * sizeof(double))
    cdef uint64_t mask = 0xFFFFFFFFFFFFFFFFULL
    try:
        _gaussians(<uint64_t>(seed & mask), <uint64_t>(sample_id & mask), n, buf)
        return [buf[i] for i in range(n)]
    finally:
        free(buf)


def ginoe_matrix(int N, seed, sample_id):
    g = gaussians(seed, sample_id, N * N)
    return [g[i * N:(i + 1) * N] for i in range(N)]


cdef inline double _sign(double a, double b) noexcept nogil:
    return fabs(a) if b >= 0.0 else -fabs(a)


# a is (n+1) x (n+1), 1-based, element (i, j) at a[i * ld + j]
cdef void _balance(double *a, int n) noexcept nogil:
    cdef int ld = n + 1
    cdef bint done = False
    cdef int i, j
    cdef double r, c, g, f, s
    while not done:
        done = True
        for i in range(1, n + 1):
            r = 0.0
            c = 0.0
            for j in range(1, n + 1):
                if j != i:
                    c += fabs(a[j * ld + i])
                    r += fabs(a[i * ld + j])
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
                        a[i * ld + j] *= g
                    for j in range(1, n + 1):
                        a[j * ld + i] *= f


cdef void _elmhes(double *a, int n) noexcept nogil:
    cdef int ld = n + 1
    cdef int m, i, j
    cdef double x, y, tmp
    for m in range(2, n):
        x = 0.0
        i = m
        for j in range(m, n + 1):
            if fabs(a[j * ld + m - 1]) > fabs(x):
                x = a[j * ld + m - 1]
                i = j
        if i != m:
            for j in range(m - 1, n + 1):
                tmp = a[i * ld + j]
                a[i * ld + j] = a[m * ld + j]
                a[m * ld + j] = tmp
            for j in range(1, n + 1):
                tmp = a[j * ld + i]
                a[j * ld + i] = a[j * ld + m]
                a[j * ld + m] = tmp
        if x != 0.0:
            for i in range(m + 1, n + 1):
                y = a[i * ld + m - 1]
                if y != 0.0:
                    y /= x
                    a[i * ld + m - 1] = y
                    for j in range(m, n + 1):
                        a[i * ld + j] -= y * a[m * ld + j]
                    for j in range(1, n + 1):
                        a[j * ld + m] += y * a[j * ld + i]
    for i in range(3, n + 1):
        for j in range(1, i - 1):
            a[i * ld + j] = 0.0


cdef int _hqr(double *a, int n, double *wr, double *wi) noexcept nogil:
    """Returns 0 on success, -1 if the iteration cap was hit."""
    cdef int ld = n + 1
    cdef int nn, m, l, ll, k, j, its, i, mmin
    cdef double z = 0.0, y = 0.0, x = 0.0, w = 0.0, v, u, t, s = 0.0, r = 0.0, q = 0.0
    cdef double p = 0.0, anorm = 0.0
    # exceptional shifts every 10 iterations; cap as in LAPACK's dhseqr
    cdef int max_its = MAX_ITS * max(10, n)
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += fabs(a[i * ld + j])
    nn = n
    t = 0.0
    while nn >= 1:
        its = 0
        while True:
            l = 1
            ll = nn
            while ll >= 2:
                s = fabs(a[(ll - 1) * ld + ll - 1]) + fabs(a[ll * ld + ll])
                if s == 0.0:
                    s = anorm
                if fabs(a[ll * ld + ll - 1]) <= EPS * s:
                    a[ll * ld + ll - 1] = 0.0
                    l = ll
                    break
                ll -= 1
            x = a[nn * ld + nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
            else:
                y = a[(nn - 1) * ld + nn - 1]
                w = a[nn * ld + nn - 1] * a[(nn - 1) * ld + nn]
                if l == nn - 1:
                    p = 0.5 * (y - x)
                    q = p * p + w
                    z = sqrt(fabs(q))
                    x += t
                    if q >= 0.0:
                        z = p + _sign(z, p)
                        wr[nn - 1] = x + z
                        wr[nn] = x + z
                        if z != 0.0:
                            wr[nn] = x - w / z
                        wi[nn - 1] = 0.0
                        wi[nn] = 0.0
                    else:
                        wr[nn - 1] = x + p
                        wr[nn] = x + p
                        wi[nn] = z
                        wi[nn - 1] = -z
                    nn -= 2
                else:
                    if its == max_its:
                        return -1
                    if its and its % 10 == 0:
                        t += x
                        for i in range(1, nn + 1):
                            a[i * ld + i] -= x
                        s = fabs(a[nn * ld + nn - 1]) + fabs(a[(nn - 1) * ld + nn - 2])
                        x = 0.75 * s
                        y = x
                        w = -0.4375 * s * s
                    its += 1
                    m = nn - 2
                    while m >= l:
                        z = a[m * ld + m]
                        r = x - z
                        s = y - z
                        p = (r * s - w) / a[(m + 1) * ld + m] + a[m * ld + m + 1]
                        q = a[(m + 1) * ld + m + 1] - z - r - s
                        r = a[(m + 2) * ld + m + 1]
                        s = fabs(p) + fabs(q) + fabs(r)
                        p /= s
                        q /= s
                        r /= s
                        if m == l:
                            break
                        u = fabs(a[m * ld + m - 1]) * (fabs(q) + fabs(r))
                        v = fabs(p) * (fabs(a[(m - 1) * ld + m - 1]) + fabs(z)
                                       + fabs(a[(m + 1) * ld + m + 1]))
                        if u <= EPS * v:
                            break
                        m -= 1
                    for i in range(m + 2, nn + 1):
                        a[i * ld + i - 2] = 0.0
                        if i != m + 2:
                            a[i * ld + i - 3] = 0.0
                    k = m
                    while k <= nn - 1:
                        if k != m:
                            p = a[k * ld + k - 1]
                            q = a[(k + 1) * ld + k - 1]
                            r = 0.0
                            if k != nn - 1:
                                r = a[(k + 2) * ld + k - 1]
                            x = fabs(p) + fabs(q) + fabs(r)
                            if x != 0.0:
                                p /= x
                                q /= x
                                r /= x
                        s = _sign(sqrt(p * p + q * q + r * r), p)
                        if s != 0.0:
                            if k == m:
                                if l != m:
                                    a[k * ld + k - 1] = -a[k * ld + k - 1]
                            else:
                                a[k * ld + k - 1] = -s * x
                            p += s
                            x = p / s
                            y = q / s
                            z = r / s
                            q /= p
                            r /= p
                            for j in range(k, nn + 1):
                                p = a[k * ld + j] + q * a[(k + 1) * ld + j]
                                if k != nn - 1:
                                    p += r * a[(k + 2) * ld + j]
                                    a[(k + 2) * ld + j] -= p * z
                                a[(k + 1) * ld + j] -= p * y
                                a[k * ld + j] -= p * x
                            mmin = nn if nn < k + 3 else k + 3
                            for i in range(l, mmin + 1):
                                p = x * a[i * ld + k] + y * a[i * ld + k + 1]
                                if k != nn - 1:
                                    p += z * a[i * ld + k + 2]
                                    a[i * ld + k + 2] -= p * r
                                a[i * ld + k + 1] -= p * q
                                a[i * ld + k] -= p
                        k += 1
            if not (l < nn - 1):
                break
    return 0


cdef int _eig(double *a, int n, double *wr, double *wi) noexcept nogil:
    _balance(a, n)
    _elmhes(a, n)
    return _hqr(a, n, wr, wi)


def eigenvalues(matrix):
    """(wr, wi) of a square real matrix; wi[j] == 0.0 marks a real eigenvalue."""
    cdef int n = len(matrix)
    cdef int ld = n + 1
    cdef int i, j, rc
    cdef double *a = <double *> malloc(ld * ld * sizeof(double))
    cdef double *wr = <double *> malloc(ld * sizeof(double))
    cdef double *wi = <double *> malloc(ld * sizeof(double))
    try:
        for i in range(ld * ld):
            a[i] = 0.0
        for i in range(n):
            row = matrix[i]
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j in range(n):
                a[(i + 1) * ld + j + 1] = float(row[j])
        with nogil:
            rc = _eig(a, n, wr, wi)
        if rc:
            raise QRFailure("Francis QR did not converge")
        return [wr[i] for i in range(1, n + 1)], [wi[i] for i in range(1, n + 1)]
    finally:
        free(a)
        free(wr)
        free(wi)


def run_block(int N, seed, start, int count, powers, bint keep_reals=False):
    """Same contract as _pykernel.run_block."""
    cdef int ld = N + 1
    cdef int npow = len(powers)
    cdef int i, j, c, e, q, nr, rc
    cdef double acc, ra, rb, xx, yy, tmp
    cdef uint64_t mask = 0xFFFFFFFFFFFFFFFFULL
    cdef uint64_t s64 = <uint64_t>(seed & mask)
    cdef uint64_t sid
    cdef double *g = <double *> malloc(N * N * sizeof(double))
    cdef double *a = <double *> malloc(ld * ld * sizeof(double))
    cdef double *wr = <double *> malloc(ld * sizeof(double))
    cdef double *wi = <double *> malloc(ld * sizeof(double))
    cdef int *pw = <int *> malloc(max(npow, 1) * sizeof(int))
    cdef double *rs = <double *> malloc(max(npow, 1) * sizeof(double))
    cdef double *ts = <double *> malloc(max(npow, 1) * sizeof(double))
    nan = float("nan")
    n_real, real_sums, trace_sums, failed, kept = [], [], [], [], []
    try:
        for q in range(npow):
            pw[q] = int(powers[q])
        for c in range(count):
            py_sid = start + c
            sid = <uint64_t>(py_sid & mask)
            with nogil:
                _gaussians(s64, sid, N * N, g)
                for i in range(ld * ld):
                    a[i] = 0.0
                for i in range(N):
                    for j in range(N):
                        a[(i + 1) * ld + j + 1] = g[i * N + j]
                rc = _eig(a, N, wr, wi)
                if rc == 0:
                    nr = 0
                    for j in range(1, N + 1):
                        if wi[j] == 0.0:
                            nr += 1
                    for q in range(npow):
                        e = pw[q]
                        acc = 0.0
                        for j in range(1, N + 1):
                            if wi[j] == 0.0:
                                acc += pow(wr[j], <double>e)
                        rs[q] = acc
                        acc = 0.0
                        for j in range(1, N + 1):
                            ra = 1.0
                            rb = 0.0
                            xx = wr[j]
                            yy = wi[j]
                            for i in range(e):
                                tmp = ra * xx - rb * yy
                                rb = ra * yy + rb * xx
                                ra = tmp
                            acc += ra
                        ts[q] = acc
            if rc:
                failed.append(py_sid)
                n_real.append(-1)
                real_sums.append([nan] * npow)
                trace_sums.append([nan] * npow)
                if keep_reals:
                    kept.append([])
                continue
            n_real.append(nr)
            real_sums.append([rs[q] for q in range(npow)])
            trace_sums.append([ts[q] for q in range(npow)])
            if keep_reals:
                kept.append([wr[j] for j in range(1, N + 1) if wi[j] == 0.0])
        return n_real, real_sums, trace_sums, failed, kept
    finally:
        free(g)
        free(a)
        free(wr)
        free(wi)
        free(pw)
        free(rs)
        free(ts)
