"""Compare the compiled Hungarian kernel with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 50 100 200 400] [--reps 5]

Both backends are called directly, so the comparison does not depend on
``RELAYSEL_PURE``.  Each size also checks that the two return the same
permutation.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from relaysel import _fallback

try:
    from relaysel import _kernels
except ImportError:
    _kernels = None


def _time(fn, w, reps):
    out = []
    for _ in range(reps):
        t0 = time.perf_counter()
        perm = fn(w)
        out.append(time.perf_counter() - t0)
    return statistics.median(out), perm


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>6} {'compiled_ms':>12} {'python_ms':>12} {'speedup':>8}  same")
    for n in args.sizes:
        w = rng.uniform(0.0, 1e7, (n, n))
        # the fallback is slow at large n, so fewer repetitions there
        t_c, p_c = _time(_kernels.hungarian_max, w, args.reps)
        t_p, p_p = _time(_fallback.hungarian_max, w, max(1, args.reps if n <= 200 else 1))
        same = bool(np.array_equal(p_c, p_p))
        print(f"{n:>6} {t_c * 1e3:>12.2f} {t_p * 1e3:>12.2f} {t_p / t_c:>8.1f}  {same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
