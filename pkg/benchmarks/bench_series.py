"""Compare the compiled and pure-numpy oracle series backends.

Usage::

    python3 benchmarks/bench_series.py [--repeat N] [--rel-tol V]

Each case is timed with the best of ``--repeat`` runs after one warm-up call
(the warm-up absorbs numba compilation). Values from the two backends are
also compared so a speedup is never reported for diverging results.
"""

from __future__ import annotations

import argparse
import math
import time

from stdqbose import _series
from stdqbose.qkernel import Phase, Real

CASES = [
    ("classical r=4 x=0.1", _series.KIND_CLASSICAL, 0j, 4, 0.1),
    ("std q=1.3 r=3 x=3", _series.KIND_STD, Real(1.3).log_q, 3, 3.0),
    ("std q=0.7 r=5 x=2", _series.KIND_STD, Real(0.7).log_q, 5, 2.0),
    ("std theta=pi/3 r=5 x=0.2", _series.KIND_STD, Phase(math.pi / 3).log_q, 5, 0.2),
    ("std theta=0.7 r=2 x=0.02", _series.KIND_STD, Phase(0.7).log_q, 2, 0.02),
    ("bm q=1.2 r=3 x=1", _series.KIND_BM, Real(1.2).log_q, 3, 1.0),
]


def best_time(fn, repeat: int) -> float:
    fn()
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--rel-tol", type=float, default=1e-12)
    args = parser.parse_args(argv)

    backends = ["numpy"] + (["numba"] if _series.HAVE_NUMBA else [])
    if len(backends) == 1:
        print("numba unavailable (or disabled by STDQBOSE_NO_NUMBA); timing numpy only")

    print(f"{'case':<28}{'terms':>8}" + "".join(f"{b + ' [us]':>14}" for b in backends) + f"{'speedup':>10}{'rel diff':>11}")
    for label, kind, log_q, r, x in CASES:
        times, values = {}, {}
        for b in backends:
            call = lambda: _series.falling_series(kind, log_q, r, x, args.rel_tol, 10**6, backend=b)  # noqa: E731
            values[b] = call()
            times[b] = best_time(call, args.repeat)
        s0, n0, _ = values["numpy"]
        line = f"{label:<28}{n0:>8}" + "".join(f"{times[b] * 1e6:>14.1f}" for b in backends)
        if "numba" in times:
            diff = abs(values["numba"][0] - s0) / abs(s0)
            line += f"{times['numpy'] / times['numba']:>9.1f}x{diff:>11.1e}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
