"""Compare the numba and numpy kernel backends on batched Hilbert distances.

    python benchmarks/bench_kernels.py [--pairs N] [--repeat R]
"""
import argparse
import time

import numpy as np

from hilbert2d import _kernels
from hilbert2d.catalogue import default_catalogue
from hilbert2d.convex_domain import Polygon


def _chords(dom, X, D, backend):
    if isinstance(dom, Polygon):
        return _kernels.polygon_chord_params(dom.normals, dom.offsets, X, D, backend=backend)
    return _kernels.superellipse_chord_params(dom.center, dom.inv_frame, dom.exponent,
                                              dom.reach, X, D, backend=backend)


def bench(dom, X, D, backend, repeat):
    lo, hi = _chords(dom, X, D, backend)  # warm-up, includes JIT compile
    _kernels.log_cross_ratio(lo, hi, backend=backend)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        lo, hi = _chords(dom, X, D, backend)
        _kernels.log_cross_ratio(lo, hi, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    print(f"{'domain':<18}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for k, (name, dom) in enumerate(default_catalogue()):
        rng = np.random.default_rng(k)
        P = dom.sample_interior(rng, 2 * args.pairs)
        X = np.ascontiguousarray(P[: args.pairs])
        D = np.ascontiguousarray(P[args.pairs:] - X)
        times = [bench(dom, X, D, b, args.repeat) for b in backends]
        ratio = times[0] / times[-1] if len(times) > 1 else 1.0
        print(f"{name:<18}" + "".join(f"{1e3 * t:10.1f}ms" for t in times) + f"{ratio:9.1f}x")


if __name__ == "__main__":
    main()
