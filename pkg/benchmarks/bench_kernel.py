"""Compare the compiled and pure-Python term kernels.

Times enumerating every level up to N (interning all products) followed by
classifying every interned term, in a fresh store per repetition.

    python3 benchmarks/bench_kernel.py [--level 12] [--repeat 3]
"""

import argparse
import statistics
import time

from freemagma import TermStore
from freemagma import _pykernel

try:
    from freemagma import _ckernel
except ImportError:
    _ckernel = None


def run_once(backend, level):
    store = TermStore(max_level=level, backend=backend)
    t0 = time.perf_counter()
    for n in range(1, level + 1):
        store.enumerate_level(n)
    t1 = time.perf_counter()
    store.signature(store.term(len(store) - 1))
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1, len(store)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--level", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = [_pykernel] + ([_ckernel] if _ckernel else [])
    if _ckernel is None:
        print("compiled kernel not built; timing the Python kernel only")
    results = {}
    for k in backends:
        runs = [run_once(k, args.level) for _ in range(args.repeat)]
        enum = statistics.median(r[0] for r in runs)
        cls = statistics.median(r[1] for r in runs)
        results[k.BACKEND] = enum + cls
        print(f"{k.BACKEND:>7}: {runs[0][2]:>9} terms  enumerate {enum:7.3f}s  "
              f"classify {cls:7.3f}s  total {enum + cls:7.3f}s")
    if len(results) == 2:
        print(f"speedup: {results['python'] / results['cython']:.1f}x")


if __name__ == "__main__":
    main()
