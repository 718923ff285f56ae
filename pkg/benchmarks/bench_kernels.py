"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot paths -- divergence-distribution enumeration and the
binomial-MGF grid used by the conjecture scanner -- on each available
backend and reports wall-clock times plus the speedup ratio.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from klconc.kernels import _pyfallback

try:
    from klconc.kernels import _speedups
except ImportError:
    _speedups = None


def bench_enumeration(mod, repeat):
    probs = np.array([0.2, 0.3, 0.5])
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for n in (50, 100, 150):
            mod.enumerate_divergence(n, probs)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mgf_grid(mod, repeat):
    ps = np.linspace(0.0, 1.0, 101)
    xs = np.linspace(0.0, 0.95, 20)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for n in range(1, 101):
            for x in xs:
                mod.binom_kl_mgf_grid(n, ps, float(x))
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions; best of N is reported")
    args = parser.parse_args()

    backends = [("python", _pyfallback)]
    if _speedups is not None:
        backends.append(("compiled", _speedups))
    else:
        print("compiled extension not available; timing fallback only")

    workloads = [
        ("enumeration (k=3, n up to 150)", bench_enumeration),
        ("mgf grid (100 n x 101 p x 20 x)", bench_mgf_grid),
    ]
    for label, fn in workloads:
        times = {name: fn(mod, args.repeat) for name, mod in backends}
        line = f"{label}: " + ", ".join(
            f"{name} {t * 1e3:.1f} ms" for name, t in times.items()
        )
        if len(times) == 2:
            line += f"  (speedup {times['python'] / times['compiled']:.1f}x)"
        print(line)


if __name__ == "__main__":
    main()
