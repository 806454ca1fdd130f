"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --n 20000 --repeat 3

Both backends run on the same inputs; outputs are compared before timing.
"""

import argparse
import time

import numpy as np

from cmcuts import _pykernels
from cmcuts.generator import generate, sample_degree_sequence
from cmcuts.kernels import available_backends
from cmcuts.theory import DegreeDistribution


def cases(n, seed):
    dist = DegreeDistribution({1: 0.3, 2: 0.3, 3: 0.4})
    g = generate(sample_degree_sequence(dist, n, seed), seed + 1)
    indptr, indices = g.csr
    wptr, nbr, wt = g.weighted_csr
    rng = np.random.default_rng(seed)
    side = np.zeros(n, dtype=np.int8)
    side[rng.permutation(n)[: n // 2]] = 1
    order = rng.permutation(n)
    small = generate(sample_degree_sequence(dist, 18, seed), seed + 2)
    sp, sw = small.multiplicities()
    return {
        "peel_core": (indptr, indices, 2),
        "bfs_levels": (indptr, indices, np.array([0]), -1),
        "two_color": (indptr, indices),
        "count_cycles": (wptr, nbr, wt, 6),
        "maxcut_flip": (wptr, nbr, wt, side, order),
        "bisect_swap": (wptr, nbr, wt, side, order),
        "maxcut_exhaustive": (small.n, sp[:, 0], sp[:, 1], sw),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def best_time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        copies = [a.copy() if isinstance(a, np.ndarray) else a for a in args]
        t = time.perf_counter()
        fn(*copies)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    backends = available_backends()
    fast = backends.get("cython")
    if fast is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<18} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8}")
    for name, kargs in cases(args.n, args.seed).items():
        py = getattr(_pykernels, name)
        t_py = best_time(py, kargs, args.repeat)
        if fast is None:
            print(f"{name:<18} {t_py:11.4f} {'-':>11} {'-':>8}")
            continue
        cy = getattr(fast, name)
        copies = [a.copy() if isinstance(a, np.ndarray) else a for a in kargs]
        ok = _same(py(*copies), cy(*[a.copy() if isinstance(a, np.ndarray) else a for a in kargs]))
        t_cy = best_time(cy, kargs, args.repeat)
        flag = "" if ok else "  OUTPUT MISMATCH"
        print(f"{name:<18} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:7.0f}x{flag}")


if __name__ == "__main__":
    main()
