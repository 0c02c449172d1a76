"""Compare the numba kernels with the numpy fallback.

Two parts:

* kernel level: ``reduce_matrix`` on random bit-packed F2 matrices, both
  implementations in this process;
* end to end: ``graphcode build`` on generated inputs in subprocesses with
  ``GRAPHCODES_NUMBA=1`` and ``GRAPHCODES_NUMBA=0``, checking that the two
  outputs are byte-identical.  Wall times include interpreter start-up and,
  with numba, JIT compilation, so small inputs favour the fallback.

Usage: ``python benchmarks/bench_kernels.py [--quick]``
"""
import argparse
import hashlib
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from graphcodes import _kernels as K
from graphcodes.generators import random_presentation, scaling_family
from graphcodes.scc_io import write_presentation


def random_matrix(rng, n_cols, n_rows, density):
    width = K.n_words(n_rows)
    mat = np.zeros((n_cols, width), dtype=np.uint64)
    for j in range(n_cols):
        rows = np.flatnonzero(rng.random(n_rows) < density)
        mat[j] = K.pack(rows.tolist(), width)
    return mat


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_kernel(sizes, repeat):
    rng = np.random.default_rng(0)
    # compile outside the timed region
    K.reduce_matrix_nb(random_matrix(rng, 4, 4, 0.5))
    print(f"{'matrix':>12} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for size in sizes:
        mat = random_matrix(rng, size, size, 0.05)
        t_py, (piv_py, adds_py) = best_of(lambda: K.reduce_matrix_py(mat.copy()), repeat)
        t_nb, (piv_nb, adds_nb) = best_of(lambda: K.reduce_matrix_nb(mat.copy()), repeat)
        assert np.array_equal(piv_py, piv_nb) and adds_py == adds_nb
        print(f"{size:>5}x{size:<6} {t_py:>10.4f} {t_nb:>10.4f} {t_py / t_nb:>8.1f}")


def run_build(path, flag):
    env = dict(os.environ, GRAPHCODES_NUMBA=flag)
    t0 = time.perf_counter()
    res = subprocess.run([sys.executable, "-m", "graphcodes", "build", str(path)],
                         env=env, capture_output=True, check=True)
    return time.perf_counter() - t0, hashlib.sha1(res.stdout).hexdigest()


def bench_end_to_end(inputs):
    print(f"{'input':>24} {'numpy s':>10} {'numba s':>10} {'same output':>12}")
    with tempfile.TemporaryDirectory() as tmp:
        for name, pres in inputs:
            path = Path(tmp) / f"{name}.scc"
            path.write_text(write_presentation(pres))
            t_py, h_py = run_build(path, "0")
            t_nb, h_nb = run_build(path, "1")
            print(f"{name:>24} {t_py:>10.3f} {t_nb:>10.3f} {str(h_py == h_nb):>12}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="small sizes only")
    args = parser.parse_args()
    if not K.HAVE_NUMBA:
        sys.exit("numba is not importable; nothing to compare")
    sizes = (100, 200) if args.quick else (200, 500, 1000, 2000)
    bench_kernel(sizes, repeat=1 if args.quick else 3)
    print()
    inputs = [("scaling-500", scaling_family(500))]
    if not args.quick:
        inputs += [("scaling-2000", scaling_family(2000)),
                   ("random-200x300", random_presentation(1, 40, 40, 200, 300)),
                   ("random-800x1200", random_presentation(2, 60, 60, 800, 1200))]
    bench_end_to_end(inputs)


if __name__ == "__main__":
    main()
