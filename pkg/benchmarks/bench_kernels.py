"""Steady-state throughput of the two counting backends.

Runs the same simulation chunks through the compiled (numba) and the
pure-NumPy backends, times each after a warm-up pass, and checks that the
error counts agree exactly — the two backends are required to be
bit-for-bit interchangeable, so any count mismatch is a bug, not noise.

Usage:  python3 benchmarks/bench_kernels.py [--trials N] [--repeats R]
"""

import argparse
import time

from peakysim.model import Scenario, db_to_linear
from peakysim.montecarlo import get_backend, set_backend, simulate

CASES = [
    ("oopsk", "coherent", 4, 0.5),
    ("oopsk", "noncoherent", 8, 0.5),
    ("oofsk", "coherent", 8, 0.5),
    ("oofsk", "noncoherent", 16, 0.5),
]


def _run(scenario, trials, backend, repeats):
    set_backend(backend)
    simulate(scenario, trials=min(trials, 1 << 16), seed=1)  # warm-up/compile
    best = float("inf")
    errors = None
    for _ in range(repeats):
        started = time.perf_counter()
        result = simulate(scenario, trials=trials, seed=1)
        best = min(best, time.perf_counter() - started)
        errors = result.errors
    return best, errors


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    try:
        set_backend("numba")
    except Exception:
        print("compiled backend unavailable; nothing to compare")
        return 1
    original = get_backend()

    header = f"{'scenario':32s} {'numba':>12s} {'numpy':>12s} {'speedup':>8s}"
    print(f"{args.trials} trials per run, best of {args.repeats} repeats")
    print(header)
    print("-" * len(header))
    mismatches = 0
    try:
        for scheme, regime, M, nu in CASES:
            scenario = Scenario.build(
                scheme, M, nu, regime, k_factor=1.0, omega=1.0,
                ebn0=db_to_linear(5.0),
            )
            jit_time, jit_errors = _run(scenario, args.trials, "numba", args.repeats)
            np_time, np_errors = _run(scenario, args.trials, "numpy", args.repeats)
            label = f"{scheme} {regime} M={M} nu={nu}"
            jit_rate = args.trials / jit_time / 1e6
            np_rate = args.trials / np_time / 1e6
            print(
                f"{label:32s} {jit_rate:9.2f} M/s {np_rate:9.2f} M/s "
                f"{np_time / jit_time:7.2f}x"
            )
            if jit_errors != np_errors:
                mismatches += 1
                print(
                    f"  COUNT MISMATCH: numba={jit_errors} numpy={np_errors}"
                )
    finally:
        set_backend(original)
    if mismatches:
        print(f"{mismatches} backend count mismatches — backends have diverged")
        return 1
    print("error counts identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
