"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from pure_labour import _kernels


def power_case(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    A = rng.uniform(0.0, 1.0, (n, n))
    A /= A.sum(axis=0).max() * 1.5
    return (np.ascontiguousarray(A), 1e-3, 1e-12, 1_000_000, 0)


def ledger_case(n: int, periods: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    N = rng.integers(1, 5, n).astype(float)
    F = rng.uniform(0.5, 2.0, n)
    Q = N.sum() * F * rng.uniform(1.0, 2.0, n)
    B = np.ones((n, n), dtype=np.uint8)
    p = N / N.sum() / F  # zero-flux prices, so nobody collapses
    return (p, Q, N, F, B, True, periods, np.ones(n), 1e-9, False)


CASES = {
    "power_iterate n=3": ("power_iterate", power_case(3)),
    "power_iterate n=6": ("power_iterate", power_case(6)),
    "run_ledger n=3 T=1000": ("run_ledger", ledger_case(3, 1000)),
    "run_ledger n=6 T=10000": ("run_ledger", ledger_case(6, 10_000)),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = _kernels.backends()
    if "cython" not in backends:
        print("compiled extension not built; run: python3 setup.py build_ext --inplace")
    names = sorted(backends)
    print(f"{'case':<24}" + "".join(f"{b + ' (ms)':>16}" for b in names) + f"{'speedup':>10}")
    for label, (fn, call_args) in CASES.items():
        times = {}
        for b in names:
            f = getattr(backends[b], fn)
            number = max(1, int(0.2 / max(timeit.timeit(lambda: f(*call_args), number=1), 1e-6)))
            best = min(timeit.repeat(lambda: f(*call_args), number=number, repeat=args.repeat))
            times[b] = best / number * 1e3
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:<24}" + "".join(f"{times[b]:>16.4f}" for b in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
