"""GinOE sampling and empirical moment statistics.

Every sample has its own counter-based substream (key = (seed, sample id)),
and samples are processed in fixed-size chunks whose results are concatenated
in sample order before aggregation, so a summary depends only on
(N, seed, n_samples), not on the worker count.
"""
from __future__ import annotations

import enum
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, EigensolverError
from ._backend import BACKEND, kernel

CHUNK = 2048


class RealnessMode(enum.Enum):
    SCHUR_BLOCKS = "schur-blocks"
    IMAG_THRESHOLD = "imag-threshold"


@dataclass(frozen=True)
class MCConfig:
    N: int
    n_samples: int
    seed: int = 0
    workers: int = 1
    realness_mode: RealnessMode = RealnessMode.SCHUR_BLOCKS
    imag_eps: float = 1e-9

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be >= 1")
        if self.n_samples < 1:
            raise DomainError("n_samples must be >= 1")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if isinstance(self.realness_mode, str):
            object.__setattr__(self, "realness_mode", RealnessMode(self.realness_mode))


@dataclass
class MCSummary:
    N: int
    n_samples: int
    kind: str                 # "real" or "trace"
    p_list: tuple
    means: dict
    std_errors: dict
    count_histogram: dict
    n_failed: int = 0
    failed_ids: tuple = ()
    density: dict | None = None
    backend: str = BACKEND
    extra: dict = field(default_factory=dict)

    @property
    def parity_ok(self) -> bool:
        return all((k - self.N) % 2 == 0 for k in self.count_histogram)

    def within(self, p, exact, n_sigma: float = 4.0) -> bool:
        return abs(self.means[p] - float(exact)) <= n_sigma * self.std_errors[p]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "n_samples": self.n_samples,
            "kind": self.kind,
            "p": list(self.p_list),
            "means": {str(k): v for k, v in self.means.items()},
            "std_errors": {str(k): v for k, v in self.std_errors.items()},
            "count_histogram": {str(k): v for k, v in sorted(self.count_histogram.items())},
            "n_failed": self.n_failed,
            "backend": self.backend,
        }


def sample_ginoe(N: int, seed: int, sample_id: int) -> list:
    """The N x N matrix of standard normals for one (seed, sample id)."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return kernel.ginoe_matrix(N, seed, sample_id)


def real_eigenvalues(matrix, mode=RealnessMode.SCHUR_BLOCKS, eps: float = 1e-9) -> list:
    """Sorted real eigenvalues of a real square matrix."""
    mode = RealnessMode(mode) if isinstance(mode, str) else mode
    if mode is RealnessMode.SCHUR_BLOCKS:
        try:
            wr, wi = kernel.eigenvalues(matrix)
        except kernel.QRFailure as exc:
            raise EigensolverError(str(exc)) from exc
        return sorted(x for x, y in zip(wr, wi) if y == 0.0)
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("matrix must be square")
    ev = np.linalg.eigvals(a)
    tol = eps * float(np.linalg.norm(a))
    return sorted(float(z.real) for z in ev if abs(z.imag) <= tol)


def _run_chunk(args):
    N, seed, start, count, powers, keep = args
    return kernel.run_block(N, seed, start, count, powers, keep)


def _threshold_chunk(args):
    N, seed, start, count, powers, keep, eps = args
    n_real, rs, ts, failed, kept = [], [], [], [], []
    for sid in range(start, start + count):
        a = np.asarray(kernel.ginoe_matrix(N, seed, sid))
        ev = np.linalg.eigvals(a)
        tol = eps * float(np.linalg.norm(a))
        reals = [float(z.real) for z in ev if abs(z.imag) <= tol]
        n_real.append(len(reals))
        rs.append([math.fsum(x ** e for x in reals) for e in powers])
        ts.append([math.fsum((z ** e).real for z in ev) for e in powers])
        if keep:
            kept.append(reals)
    return n_real, rs, ts, failed, kept


def _simulate(cfg: MCConfig, powers, keep: bool):
    chunks = []
    start = 0
    while start < cfg.n_samples:
        count = min(CHUNK, cfg.n_samples - start)
        chunks.append((cfg.N, cfg.seed, start, count, list(powers), keep))
        start += count
    if cfg.realness_mode is RealnessMode.IMAG_THRESHOLD:
        fn = _threshold_chunk
        chunks = [c + (cfg.imag_eps,) for c in chunks]
    else:
        fn = _run_chunk
    if cfg.workers == 1 or len(chunks) == 1:
        parts = [fn(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            parts = list(ex.map(fn, chunks))
    n_real, rs, ts, failed, kept = [], [], [], [], []
    for a, b, c, d, e in parts:
        n_real += a
        rs += b
        ts += c
        failed += d
        kept += e
    return n_real, rs, ts, failed, kept


def _mean_se(values):
    n = len(values)
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(values) / n
    if n == 1:
        return mean, math.inf
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def _summarize(cfg, kind, p_list, n_real, sums, failed, density=None) -> MCSummary:
    ok = [i for i, k in enumerate(n_real) if k >= 0]
    means, ses = {}, {}
    for q, p in enumerate(p_list):
        means[p], ses[p] = _mean_se([sums[i][q] for i in ok])
    hist = Counter(n_real[i] for i in ok)
    return MCSummary(cfg.N, cfg.n_samples, kind, tuple(p_list), means, ses, dict(hist),
                     len(failed), tuple(failed), density,
                     BACKEND if cfg.realness_mode is RealnessMode.SCHUR_BLOCKS else "numpy")


def _check_p(p_list):
    out = []
    for p in p_list:
        if int(p) != p or p < 0:
            raise DomainError("p must be a nonnegative integer")
        out.append(int(p))
    return out


def empirical_real_moments(cfg: MCConfig, p_list, bins: int | None = None,
                           lo: float = -4.0, hi: float = 4.0) -> MCSummary:
    """Sample means of sum |x|^(2p) over real eigenvalues, p in ``p_list``.

    With ``bins`` set, also returns a binned density estimate of the real
    eigenvalues with per-bin standard errors.
    """
    p_list = _check_p(p_list)
    keep = bins is not None
    n_real, rs, _, failed, kept = _simulate(cfg, [2 * p for p in p_list], keep)
    density = None
    if keep:
        density = _binned_density(kept, n_real, bins, lo, hi)
    return _summarize(cfg, "real", p_list, n_real, rs, failed, density)


def empirical_trace_moments(cfg: MCConfig, p_list) -> MCSummary:
    """Sample means of Tr G^(2p) (summed over all eigenvalues)."""
    p_list = _check_p(p_list)
    n_real, _, ts, failed, _ = _simulate(cfg, [2 * p for p in p_list], False)
    return _summarize(cfg, "trace", p_list, n_real, ts, failed)


def _binned_density(kept, n_real, bins: int, lo: float, hi: float) -> dict:
    edges = np.linspace(lo, hi, bins + 1)
    width = (hi - lo) / bins
    ok = [i for i, k in enumerate(n_real) if k >= 0]
    per = np.zeros((len(ok), bins))
    for row, i in enumerate(ok):
        if kept[i]:
            per[row], _ = np.histogram(kept[i], bins=edges)
    n = len(ok)
    mean = per.mean(axis=0) / width
    se = per.std(axis=0, ddof=1) / math.sqrt(n) / width if n > 1 else np.full(bins, np.inf)
    return {"edges": edges.tolist(), "density": mean.tolist(), "std_errors": se.tolist()}


def dump_samples(cfg: MCConfig, path) -> int:
    """Write one JSON line per sample: id, real count, real eigenvalues."""
    n_real, _, _, failed, kept = _simulate(cfg, [0], True)
    bad = set(failed)
    with open(path, "w") as fh:
        for sid in range(cfg.n_samples):
            rec = {"sample": sid, "n_real": n_real[sid], "real_eigenvalues": sorted(kept[sid])}
            if sid in bad:
                rec["failed"] = True
            fh.write(json.dumps(rec) + "\n")
    return cfg.n_samples

