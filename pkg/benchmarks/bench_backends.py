"""Benchmark the pure-Python field kernels against the compiled extension.

Runs the same workloads through every importable backend and reports
throughput plus speedup relative to the pure-Python baseline:

    python benchmarks/bench_backends.py [--repeat N] [--width BYTES]

The compiled backend is skipped automatically when the extension is not
built (or when SHARDCAST_PURE_PYTHON=1 forced the pure path at import).
"""

import argparse
import time

from shardcast.kernel import BACKEND, available_backends
from shardcast.rng import RandomSource


def time_op(fn, repeat):
    start = time.perf_counter()
    for _ in range(repeat):
        fn()
    return time.perf_counter() - start


def build_workloads(module, repeat, width):
    rng = RandomSource(4242)
    secret = rng.randbytes(width)
    coeffs = rng.randbytes(width * 2)  # k = 3: two coefficient rows
    shares = module.split_secret(secret, 3, 5, coeffs)
    xs = bytes([1, 3, 5])
    bodies = b"".join(shares[i] for i in (0, 2, 4))

    def mul_grid():
        mul = module.gf_mul
        for a in range(256):
            for b in range(256):
                mul(a, b)

    return [
        ("gf_mul 64k pairs", max(1, repeat // 50), mul_grid),
        ("split k=3 n=5", repeat, lambda: module.split_secret(secret, 3, 5, coeffs)),
        ("weights k=3", repeat, lambda: module.lagrange_weights(xs)),
        ("recover k=3", repeat, lambda: module.recover_secret(xs, bodies)),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20_000,
                        help="iterations per workload (default 20000)")
    parser.add_argument("--width", type=int, default=16,
                        help="secret length in bytes (default 16)")
    args = parser.parse_args()

    backends = available_backends()
    print(f"active backend: {BACKEND}; candidates: {', '.join(backends)}")
    results: dict[str, dict[str, float]] = {}
    for name, module in backends.items():
        results[name] = {}
        for label, repeat, fn in build_workloads(module, args.repeat, args.width):
            elapsed = time_op(fn, repeat)
            results[name][label] = repeat / elapsed
            print(f"  {name:>8}  {label:<18} {repeat / elapsed:>12,.0f} ops/s")

    if "compiled" in results and "python" in results:
        print("speedup (compiled / python):")
        for label in results["python"]:
            ratio = results["compiled"][label] / results["python"][label]
            print(f"  {label:<18} {ratio:>6.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
