"""Compare the compiled kernels with the numpy fallback.

Kernel timings call both backends in one process.  The end-to-end rows run
in child processes, with ``FOLDGATE_PURE=1`` for the fallback, because the
backend is fixed at import.

    python benchmarks/bench_kernels.py [--repeat N] [--skip-group]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from foldgate import _pykernels as py

try:
    from foldgate import _ckernels as cy
except ImportError:
    cy = None

U64 = np.uint64

END_TO_END = {
    "bring census": (
        "from foldgate.fixtures import bring\n"
        "from foldgate.dualities import automorphism_group, zx_dualities\n"
        "c = bring().code; automorphism_group(c); zx_dualities(c)"
    ),
    "hgp distance": (
        "from foldgate.fixtures import hgp_seed\n"
        "from foldgate.constructors import hypergraph_product\n"
        "from foldgate.css import distance\n"
        "s = hgp_seed(); distance(hypergraph_product(s, s), 4)"
    ),
    "bring gate group order": (
        "from foldgate.fixtures import bring\n"
        "from foldgate.dualities import find_tau0\n"
        "from foldgate.gates import gate_set, qubit_permutation\n"
        "d = bring(); c = d.code\n"
        "auts = [qubit_permutation(c, p) for p in d.perms.values()]\n"
        "gate_set(c, d.primed, auts, [find_tau0(c, d.basis).duality]).group().order()"
    ),
}


def kernel_cases(rng):
    big = rng.integers(0, 2**63, size=(400, 8), dtype=np.int64).astype(U64)
    mats = rng.integers(0, 2**16, size=(20000, 16), dtype=np.int64).astype(U64)
    one = rng.integers(0, 2**16, size=16, dtype=np.int64).astype(U64)
    pts = rng.integers(1, 2**16, size=65535, dtype=np.int64).astype(U64)
    syn = rng.integers(0, 2**20, size=(40, 1), dtype=np.int64).astype(U64)
    log = rng.integers(0, 2**8, size=(40, 1), dtype=np.int64).astype(U64)
    return {
        "rref 400x512": lambda k: k.rref(big.copy(), 512),
        "mat_mul 20000 x 16x16": lambda k: k.mat_mul(mats, one),
        "vec_images 65535": lambda k: k.vec_images(pts, one),
        "point_images 20000": lambda k: k.point_images(mats, 0b1011),
        "min_weight n=40 w<=3": lambda k: k.min_weight(syn, log, 3),
    }


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def child_time(code, pure):
    env = dict(os.environ)
    env["FOLDGATE_PURE"] = "1" if pure else "0"
    stmt = f"import time\nt = time.perf_counter()\n{code}\nprint(time.perf_counter() - t)"
    out = subprocess.run([sys.executable, "-c", stmt], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.split()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-group", action="store_true", help="skip the slowest end-to-end row")
    args = ap.parse_args()
    if cy is None:
        sys.exit("compiled kernels are not built; run `pip install -e .` first")

    print(f"{'case':<28}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for name, fn in kernel_cases(np.random.default_rng(0)).items():
        tc = best_of(lambda: fn(cy), args.repeat)
        tp = best_of(lambda: fn(py), args.repeat)
        print(f"{name:<28}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x")
    for name, code in END_TO_END.items():
        if args.skip_group and "group" in name:
            continue
        tc = child_time(code, pure=False)
        tp = child_time(code, pure=True)
        print(f"{name:<28}{tc:>12.3f}{tp:>12.3f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    t0 = time.perf_counter()
    main()
    print(f"total {time.perf_counter() - t0:.1f} s")
