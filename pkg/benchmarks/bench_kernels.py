"""Compare the numba and numpy backends of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time per call for each kernel and backend, and the
largest difference between the two results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ahls import _kernels
from ahls.autocorr import _polar_nodes
from ahls.starbody import Cube, Simplex


def _best(fn, repeat: int) -> tuple[float, np.ndarray]:
    out = fn()  # warm-up, includes compilation
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    ts = np.linspace(0.0, 4.0, 200)
    for n, alpha in ((1, 0.5), (2, 1.0), (3, 1.5)):
        th, thw, vs, vw = _polar_nodes(n)
        q = 0.5 * (n + alpha)
        yield (f"qp_polar_autocorr n={n}",
               lambda b, th=th, thw=thw, vs=vs, vw=vw, q=q, n=n: getattr(
                   _kernels, f"qp_polar_autocorr_{b}")(ts, q, 1.0, th, thw, vs, vw, float(n - 1)))
    rng = np.random.default_rng(0)
    for body in (Cube(3), Simplex(4)):
        A, b = body.halfspaces()
        P = rng.random((20000, body.dim)) * 0.5
        d = rng.standard_normal(body.dim)
        d /= np.linalg.norm(d)
        yield (f"polytope_chords {body.describe()}",
               lambda be, P=P, d=d, A=A, b=b: getattr(_kernels, f"polytope_chords_{be}")(P, d, A, b))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or AHLS_DISABLE_NUMBA set): timing numpy only")
    print(f"{'kernel':52s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speed-up':>9s} {'max diff':>10s}")
    for name, fn in cases():
        t_np, r_np = _best(lambda: fn("numpy"), args.repeat)
        if _kernels.HAVE_NUMBA:
            t_nb, r_nb = _best(lambda: fn("numba"), args.repeat)
            diff = float(np.max(np.abs(np.asarray(r_np) - np.asarray(r_nb))))
            print(f"{name:52s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:9.1f} {diff:10.2e}")
        else:
            print(f"{name:52s} {1e3 * t_np:12.3f} {'-':>12s} {'-':>9s} {'-':>10s}")


if __name__ == "__main__":
    main()
