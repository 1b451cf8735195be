"""Compare the numba and numpy kernel backends (and optionally the pure
Python reference engine) on a full positivity sweep.

    python3 benchmarks/bench_kernels.py --n 4
    python3 benchmarks/bench_kernels.py --n 5 --reference
"""

import argparse
import time

import numpy as np

from eqschubert.dense import DenseSpace
from eqschubert.kernels import HAVE_NUMBA, get_backend
from eqschubert.positivity import verify_all


def time_mul_acc(backend_name, n, degree, repeats):
    space = DenseSpace(n, get_backend(backend_name))
    size = space.t.size(degree)
    rng = np.random.default_rng(0)
    a = rng.integers(-50, 50, size).astype(np.int64)
    b = rng.integers(-50, 50, size).astype(np.int64)
    out = np.zeros(space.t.size(2 * degree), dtype=np.int64)
    space.mul_acc(out, a, degree, b, degree)  # compile / warm up
    start = time.perf_counter()
    for _ in range(repeats):
        out[:] = 0
        space.mul_acc(out, a, degree, b, degree)
    return (time.perf_counter() - start) / repeats


def time_sweep(n, engine, backend):
    # warm-up on a tiny rank so jit compilation is not billed to the sweep
    verify_all(2, engine=engine, backend=backend, sample_audit=False)
    report = verify_all(n, jobs=1, engine=engine, backend=backend, sample_audit=False)
    return report


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--degree", type=int, default=3, help="degree of operands in the micro benchmark")
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--reference", action="store_true", help="also time the pure Python engine")
    args = parser.parse_args(argv)

    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    print(f"mul_acc, {args.n} t-variables, degree {args.degree} x {args.degree}")
    for name in backends:
        print(f"  {name:10s} {time_mul_acc(name, args.n, args.degree, args.repeats) * 1e6:10.1f} us/call")

    print(f"positivity sweep n={args.n}, single process")
    rows = [("dense", name) for name in backends]
    if args.reference:
        rows.append(("reference", None))
    reports = []
    for engine, backend in rows:
        report = time_sweep(args.n, engine, backend)
        reports.append(report)
        label = engine if backend is None else f"{engine}/{backend}"
        print(
            f"  {label:16s} {report.elapsed:8.2f} s  pairs={report.pairs_checked} "
            f"nonzero={report.nonzero_constants} positive={report.all_positive}"
        )
    same = all(
        (r.pairs_checked, r.nonzero_constants, r.max_coefficient, r.all_positive)
        == (reports[0].pairs_checked, reports[0].nonzero_constants, reports[0].max_coefficient, reports[0].all_positive)
        for r in reports
    )
    print(f"reports agree: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
