"""Compiled vs pure-Python sampling kernel.

    python benchmarks/bench_kernel.py [--samples 2000] [--sizes 2,6,10,20]

Both kernels must produce identical per-sample statistics; the script checks
that before reporting timings.
"""
import argparse
import time

from ginoe_moments.montecarlo import _pykernel

try:
    from ginoe_moments.montecarlo import _kernel
except ImportError:
    _kernel = None


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--sizes", default="2,6,10,20")
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernel is None:
        print("compiled kernel not built; reinstall with Cython available")
        return 1
    powers = [0, 2, 4]
    print(f"{'N':>4} {'python s':>10} {'cython s':>10} {'speedup':>8}  identical")
    for N in (int(x) for x in args.sizes.split(",")):
        # the Python kernel is slow, so time it on a tenth of the samples and scale
        n_py = max(1, args.samples // 10)
        t_py, r_py = _time(lambda: _pykernel.run_block(N, args.seed, 0, n_py, powers), 1)
        t_py *= args.samples / n_py
        t_cy, r_cy = _time(lambda: _kernel.run_block(N, args.seed, 0, args.samples, powers),
                           args.repeat)
        same = all(a == b[:n_py] for a, b in zip(r_py, r_cy))
        print(f"{N:>4} {t_py:>10.3f} {t_cy:>10.3f} {t_py / t_cy:>8.1f}  {same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
