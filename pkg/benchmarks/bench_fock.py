"""Compare the compiled and pure-Python Fock kernels.

    python3 benchmarks/bench_fock.py [--repeat N]

Kernel timings call both modules directly.  The end-to-end timing runs a
lattice mode sweep in a subprocess per backend, selected with
COSETVA_PURE_PYTHON.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

from cosetva import _fockpy

try:
    from cosetva import _fockc
except ImportError:
    _fockc = None

WORKLOAD = """
import time
from fractions import Fraction
from cosetva.latvoa import Lattice, LatticeVOA
V = LatticeVOA(Lattice([[2, -1], [-1, 2]]), 7)
t = time.perf_counter()
for w in V.weights_upto(6):
    for c in V.charges_at(w):
        for k in V.basis(w, c):
            for i in range(2):
                for n in (-1, 1, 2):
                    try:
                        V.hmode(i, n, k)
                    except ArithmeticError:
                        pass
print(time.perf_counter() - t)
"""


def kernel_times(mod, repeat: int) -> dict:
    key = tuple(sorted(((n, i) for n in (5, 4, 4, 3, 2, 2, 1) for i in (0, 1)), key=lambda p: (-p[0], p[1])))
    return {
        "fock_create": min(timeit.repeat(lambda: mod.fock_create(key, 3, 1), number=20000, repeat=repeat)),
        "fock_annihilate": min(timeit.repeat(lambda: mod.fock_annihilate(key, 2), number=20000, repeat=repeat)),
        "fock_degree": min(timeit.repeat(lambda: mod.fock_degree(key), number=20000, repeat=repeat)),
        "colored_partitions": min(timeit.repeat(lambda: mod.colored_partitions(14, 2), number=5, repeat=repeat)),
    }


def workload_time(pure: bool) -> float:
    env = dict(os.environ)
    env["COSETVA_PURE_PYTHON"] = "1" if pure else "0"
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _fockc is None:
        print("compiled kernels are not built; run pip install -e . --no-build-isolation")
        return 1
    py, cy = kernel_times(_fockpy, args.repeat), kernel_times(_fockc, args.repeat)
    print(f"{'kernel':<20}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name in py:
        print(f"{name:<20}{py[name]:>12.4f}{cy[name]:>12.4f}{py[name] / cy[name]:>10.2f}")
    tp, tc = workload_time(True), workload_time(False)
    print(f"{'lattice mode sweep':<20}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
