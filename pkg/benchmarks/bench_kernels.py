"""Compare the compiled and pure-Python kernels.

Times each kernel on fixed seeded inputs under both implementations, plus
two end-to-end workloads that lean on them, and prints one row per case:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

from presburger import kernels
from presburger.circuits import evaluate, evaluate_batch, prime_circuit
from presburger.diophantine import DiophantineSystem, semilinear_of


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases():
    rng = random.Random(2024)
    c = prime_circuit(3)
    bits_list = [[rng.randint(0, 1) for _ in range(c.r)] for _ in range(200)]
    columns = [rng.getrandbits(4096) for _ in range(c.n)]
    n = 6
    rows = [([rng.randint(-4, 4) for _ in range(n)], rng.randint(-8, 8)) for _ in range(8)]
    crng = random.Random(94)
    cols = [tuple(crng.randint(-4, 4) for _ in range(2)) for _ in range(9)]
    system = DiophantineSystem([[1, -2, 3], [2, 1, -1]], [2, -3])
    prime_inputs = [[(a >> i) & 1 for i in range(12)] + [1, 0, 0] for a in range(512)]

    def eval_trace():
        for bits in bits_list:
            kernels.eval_circuit(c.gates, bits)

    def eval_packed():
        kernels.eval_circuit_packed(c.gates, columns, (1 << 4096) - 1)

    def propagate():
        for _ in range(200):
            kernels.propagate_rows(rows, [0] * n, [50] * n, 32)

    def minimal():
        kernels.cd_minimal(cols, len(cols), -1, 0, 0, 0)

    def prime_sweep():
        for w in prime_inputs:
            evaluate(c, w)

    def semilinear():
        semilinear_of(system)

    def batch():
        evaluate_batch(c, columns, 4096)

    return [
        ("eval_circuit x200 (1348 gates)", eval_trace),
        ("eval_circuit_packed (4096 lanes)", eval_packed),
        ("propagate_rows x200 (8x6)", propagate),
        ("cd_minimal (2x9)", minimal),
        ("end-to-end: prime circuit sweep", prime_sweep),
        ("end-to-end: evaluate_batch", batch),
        ("end-to-end: semilinear_of", semilinear),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    impls = kernels.available()
    if "cython" not in impls:
        print("compiled kernels are not built; only the pure-Python timings are shown")
    header = f"{'case':40s}" + "".join(f"{name:>12s}" for name in impls) + ("     speedup" if len(impls) > 1 else "")
    print(header)
    original = kernels.IMPLEMENTATION
    try:
        for label, fn in cases():
            times = []
            for name in impls:
                kernels.use(name)
                fn()  # warm caches
                times.append(_best(fn, args.repeat))
            row = f"{label:40s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
            if len(times) > 1:
                row += f"{times[0] / times[1]:11.1f}x"
            print(row)
    finally:
        kernels.use(original)


if __name__ == "__main__":
    main()
