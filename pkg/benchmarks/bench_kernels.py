"""Compare the compiled and pure-Python kernels on random inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--seed S]

Prints one timing line per kernel and backend, plus the speedup.  Exits
non-zero if the two backends disagree on any input.
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit

from plumblat import _purekernels

try:
    from plumblat import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _tree_pairing(rng: random.Random, m: int) -> list[list[int]]:
    q = [[0] * m for _ in range(m)]
    for i in range(m):
        q[i][i] = rng.randint(-5, -2)
    for i in range(1, m):
        j = rng.randrange(i)
        q[i][j] = q[j][i] = 1
    return q


def subset_cases(rng: random.Random, n: int, m: int):
    out = []
    for _ in range(n):
        q = _tree_pairing(rng, m)
        kv = [rng.randint(-6, 6) for _ in range(m)]
        out.append((kv, q, rng.getrandbits(m) & rng.getrandbits(m)))
    return out


def reduce_cases(rng: random.Random, n: int, cols: int, bits: int):
    return [[rng.getrandbits(bits) for _ in range(cols)] for _ in range(n)]


def run(repeat: int, seed: int) -> int:
    rng = random.Random(seed)
    sub = subset_cases(rng, 40, 14)
    red = reduce_cases(rng, 40, 200, 220)
    kernels = [
        ("subset_min", sub, lambda mod, c: mod.subset_min(*c)),
        ("f2_reduce", red, lambda mod, c: mod.f2_reduce(c)),
    ]
    backends = [("python", _purekernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not available; timing the fallback only")

    status = 0
    for name, cases, call in kernels:
        if _ckernels is not None:
            for c in cases:
                if call(_ckernels, c) != call(_purekernels, c):
                    print(f"MISMATCH in {name}")
                    status = 1
                    break
        times = {}
        for label, mod in backends:
            t = timeit.timeit(lambda: [call(mod, c) for c in cases], number=repeat)
            times[label] = t / repeat
            print(f"{name:<11} {label:<7} {times[label] * 1e3:9.2f} ms / batch of {len(cases)}")
        if "cython" in times:
            print(f"{name:<11} speedup {times['python'] / times['cython']:8.1f}x")
    return status


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    return run(args.repeat, args.seed)


if __name__ == "__main__":
    sys.exit(main())
