import json
import math

import numpy as np
import pytest

from ginoe_moments.density import rho_real
from ginoe_moments.errors import DomainError
from ginoe_moments.moments import m0_exact, moment_real, trace_moment
from ginoe_moments.montecarlo import (
    MCConfig,
    RealnessMode,
    dump_samples,
    empirical_real_moments,
    empirical_trace_moments,
    real_eigenvalues,
    sample_ginoe,
)
from ginoe_moments.montecarlo import _pykernel
from ginoe_moments.numerics.context import PrecisionContext

try:
    from ginoe_moments.montecarlo import _kernel
except ImportError:
    _kernel = None


@pytest.mark.parametrize("key", [(5, 0), (2024, 17), (2**64 - 1, 2**63 + 5)])
def test_philox_matches_numpy(key):
    bg = np.random.Philox(key=list(key), counter=[0, 0, 0, 0])
    # numpy bumps the counter before each block
    raw = [int(w) for w in bg.random_raw(12)]
    ours = []
    for block in (1, 2, 3):
        ours += _pykernel.philox4x64((block, 0, 0, 0), key)
    assert ours == raw


def test_entries_are_standard_normal():
    g = np.array([x for sid in range(2000) for row in sample_ginoe(10, 7, sid) for x in row])
    n = g.size
    assert abs(g.mean()) < 5 / math.sqrt(n)
    assert abs(g.var() - 1) < 5 * math.sqrt(2 / n)


def test_sampling_is_deterministic():
    assert sample_ginoe(5, 11, 3) == sample_ginoe(5, 11, 3)
    assert sample_ginoe(5, 11, 3) != sample_ginoe(5, 11, 4)
    assert sample_ginoe(5, 11, 3) != sample_ginoe(5, 12, 3)


def test_real_eigenvalues_examples():
    assert real_eigenvalues([[2.0, 0.0], [0.0, -1.0]]) == [-1.0, 2.0]
    assert real_eigenvalues([[0.0, -1.0], [1.0, 0.0]]) == []
    ev = real_eigenvalues([[1.0, 2.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, -4.0]])
    assert ev == pytest.approx([-4.0, 1.0, 3.0], rel=1e-12)


def _companion(roots_real, pairs):
    poly = np.poly1d([1.0])
    for r in roots_real:
        poly *= np.poly1d([1.0, -r])
    for a, b in pairs:
        poly *= np.poly1d([1.0, -2 * a, a * a + b * b])
    c = poly.coeffs
    n = len(c) - 1
    m = np.zeros((n, n))
    m[0, :] = -c[1:]
    m[1:, :-1] = np.eye(n - 1)
    return m.tolist()


@pytest.mark.parametrize("roots,pairs", [
    ([0.5], [(0.1, 1.0)]),
    ([-2.0, 1.5, 3.0], [(0.0, 0.7)]),
    ([-1.25, 0.25, 2.5, 4.0], [(1.0, 2.0), (-1.0, 0.5)]),
    ([-3.0, -1.0, 0.5, 2.0], [(0.3, 0.4), (2.0, 1.0), (-2.0, 1.5), (0.0, 2.5)]),
])
def test_planted_companion_spectra(roots, pairs):
    got = real_eigenvalues(_companion(roots, pairs))
    assert len(got) == len(roots)
    for g, r in zip(got, sorted(roots)):
        assert abs(g - r) <= 1e-10 * max(1.0, abs(r))


def test_real_eigenvalues_threshold_mode_agrees():
    for sid in range(200):
        m = sample_ginoe(7, 3, sid)
        a = real_eigenvalues(m)
        b = real_eigenvalues(m, RealnessMode.IMAG_THRESHOLD)
        assert len(a) == len(b)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


def test_real_count_parity():
    s = empirical_real_moments(MCConfig(5, 3000, seed=1), [0])
    assert s.parity_ok and s.n_failed == 0


def test_n2_p0():
    s = empirical_real_moments(MCConfig(2, 40000, seed=5), [0])
    # E[#real] = sqrt(2) for N = 2
    assert abs(float(m0_exact(2).to_mpf(64)) - math.sqrt(2)) < 1e-15
    assert s.within(0, math.sqrt(2), 4.0)


def test_n10_p1():
    s = empirical_real_moments(MCConfig(10, 20000, seed=9), [1])
    assert s.within(1, moment_real(10, 1).value.mid, 4.0)


@pytest.mark.parametrize("N,p", [(4, 2), (2, 1), (3, 3)])
def test_trace_moments(N, p):
    s = empirical_trace_moments(MCConfig(N, 40000, seed=3), [p])
    exact = trace_moment(N, p)
    assert exact == {(4, 2): 24, (2, 1): 2, (3, 3): 105}[(N, p)]
    assert s.within(p, exact, 4.0)


def test_workers_do_not_change_results():
    cfg1 = MCConfig(6, 5000, seed=42, workers=1)
    cfg4 = MCConfig(6, 5000, seed=42, workers=4)
    a = empirical_real_moments(cfg1, [0, 1, 2])
    b = empirical_real_moments(cfg4, [0, 1, 2])
    assert a.to_dict() == b.to_dict()


def test_threshold_mode_summary_close():
    a = empirical_real_moments(MCConfig(6, 3000, seed=4), [0, 1])
    b = empirical_real_moments(MCConfig(6, 3000, seed=4, realness_mode="imag-threshold"), [0, 1])
    assert a.count_histogram == b.count_histogram
    assert a.means[1] == pytest.approx(b.means[1], rel=1e-9)
    assert b.backend == "numpy"


def test_dump(tmp_path):
    path = tmp_path / "d.jsonl"
    assert dump_samples(MCConfig(4, 50, seed=8), path) == 50
    lines = [json.loads(x) for x in path.read_text().splitlines()]
    assert [r["sample"] for r in lines] == list(range(50))
    for r in lines:
        assert r["n_real"] == len(r["real_eigenvalues"])
        assert r["real_eigenvalues"] == real_eigenvalues(sample_ginoe(4, 8, r["sample"]))


def test_bad_config():
    with pytest.raises(DomainError):
        MCConfig(0, 10)
    with pytest.raises(DomainError):
        MCConfig(3, 10, seed=-1)
    with pytest.raises(DomainError):
        empirical_real_moments(MCConfig(3, 10), [0.5])


def test_binned_density_n8():
    N, bins, lo, hi = 8, 40, -4.0, 4.0
    s = empirical_real_moments(MCConfig(N, 100000, seed=2024), [0], bins=bins, lo=lo, hi=hi)
    d = s.density
    nodes, weights = np.polynomial.legendre.leggauss(5)
    ctx = PrecisionContext(64)
    edges = d["edges"]
    bad = []
    for i in range(bins):
        a, b = edges[i], edges[i + 1]
        xs = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        avg = 0.5 * sum(w * float(rho_real(N, float(x), ctx).mid) for w, x in zip(weights, xs))
        if abs(d["density"][i] - avg) > 5 * d["std_errors"][i] + 1e-12:
            bad.append((i, d["density"][i], avg, d["std_errors"][i]))
    assert not bad


@pytest.mark.skipif(_kernel is None, reason="compiled kernel not built")
@pytest.mark.parametrize("N", [1, 2, 5, 10])
def test_compiled_kernel_bit_identical(N):
    powers = [0, 2, 4, 6]
    a = _pykernel.run_block(N, 99, 100, 200, powers, True)
    b = _kernel.run_block(N, 99, 100, 200, powers, True)
    assert a == b
    assert _kernel.gaussians(99, 7, 33) == _pykernel.gaussians(99, 7, 33)
