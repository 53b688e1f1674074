"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--n 200000] [--grid-states 5] [--resolution 60]
"""

import argparse
import time

import numpy as np

from pauliapprox import B3, _backend, _fallback


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="points for the batch kernels")
    ap.add_argument("--grid-states", type=int, default=5)
    ap.add_argument("--resolution", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    d = rng.standard_normal((args.n, 3))
    pts = d / np.linalg.norm(d, axis=1)[:, None] * np.cbrt(rng.random(args.n))[:, None]
    verts = np.array([tuple(s) for s in B3.states])
    targets = pts[: args.grid_states]

    backends = [("python", _fallback)]
    if _backend.BACKEND == "cython":
        backends.append(("cython", _backend.kernels))
    else:
        print("compiled extension not built; timing the fallback only")

    cases = [
        (f"solve_batch n={args.n}", lambda k: k.solve_batch(pts)),
        (f"project_batch n={args.n}", lambda k: k.project_batch(pts)),
        (f"grid_search B3 N={args.resolution} x{args.grid_states}",
         lambda k: [k.grid_search_lattice(verts, r, args.resolution) for r in targets]),
    ]
    print(f"{'kernel':<36}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for label, fn in cases:
        times = [best_of(lambda: fn(k), args.repeat) for _, k in backends]
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{label:<36}" + "".join(f"{t * 1e3:10.1f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
