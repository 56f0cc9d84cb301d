"""Compare the compiled and pure-Python row-reduction kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--sizes 20 40 80]

Two workloads: random small-integer matrices of the given sizes, and the
equivariance and coboundary systems that ``compute_HH`` solves.  Dense
random matrices grow past int64 during fraction-free elimination, so there
the compiled path detects the overflow and redoes the work in Python
integers; the last column says which happened.  Both backends must return the same reduced matrix; the
script checks that before reporting times.
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from hopfhoch.cochains import d_CH_matrix, equivariance_constraints
from hopfhoch.linalg import QQ, ExactArray, available_backends, rref, use_backend
from hopfhoch.linalg._backend import _kernels
from hopfhoch.models import load


def _time(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def workloads(sizes):
    rng = np.random.default_rng(0)
    for n in sizes:
        # rank-deficient on purpose, so the nullspace is not trivial
        left = rng.integers(-3, 4, (n, n // 2))
        right = rng.integers(-3, 4, (n // 2, n + 7))
        yield f"random {n}x{n + 7} (rank {n // 2})", ExactArray(QQ, left @ right)
    m2 = load("m2")
    yield "m2 equivariance rows, degree 3", equivariance_constraints(m2, 3)
    yield "m2 coboundary matrix, degree 2 -> 3", d_CH_matrix(m2, 2)
    c3 = load("group-translate(C3)")
    yield "group-translate(C3) equivariance, degree 3", equivariance_constraints(c3, 3)


def fits_int64(M: ExactArray) -> bool:
    """Whether the compiled elimination finishes without overflowing (otherwise it falls back)."""
    if M.num.dtype == object:
        return False
    ok, _ = _kernels.rref_int64(np.ascontiguousarray(M.num, dtype=np.int64).copy())
    return bool(ok)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80])
    args = p.parse_args(argv)

    if "compiled" not in available_backends():
        print("compiled kernels are not built; only the Python backend is available")
        return 1
    print(f"{'workload':<44} {'python s':>10} {'compiled s':>11} {'speedup':>8}  int64")
    for label, M in workloads(args.sizes):
        with use_backend("python"):
            want = rref(M)
            t_py = _time(lambda: rref(M), args.repeat)
        with use_backend("compiled"):
            got = rref(M)
            t_c = _time(lambda: rref(M), args.repeat)
        if got[0] != want[0] or got[1:] != want[1:]:
            raise SystemExit(f"backends disagree on {label}")
        fits = "yes" if fits_int64(M) else "no, fell back"
        print(f"{label:<44} {t_py:>10.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x  {fits}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
