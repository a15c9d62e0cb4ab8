"""Compare the compiled and pure-Python kernel backends.

Run with ``python3 benchmarks/bench_kernels.py``. Each kernel is timed on the
same inputs under every importable backend and the outputs are checked equal.
"""

from __future__ import annotations

import argparse
import random
import timeit

from cactus_split.kernels import backends


def _cases(order: int, seed: int):
    rng = random.Random(seed)
    a = [rng.randrange(10**12) for _ in range(order + 1)]
    b = [rng.randrange(10**12) for _ in range(order + 1)]
    return {
        "convolve": lambda k: k.convolve(a, b, order),
        "dot": lambda k: [k.dot(a, b, n, 0, n) for n in range(order + 1)],
        "cactus_census(6)": lambda k: k.cactus_census(6),
    }


def main(argv: list[str] | None = None) -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--order", type=int, default=400)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args(argv)
    impls = backends()
    print(f"backends: {', '.join(impls)}")
    print(f"{'kernel':<18}" + "".join(f"{name:>12}" for name in impls) + f"{'speedup':>10}")
    for label, fn in _cases(args.order, args.seed).items():
        times = {}
        results = {}
        for name, mod in impls.items():
            results[name] = fn(mod)
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        ref = results["python"]
        if any(r != ref for r in results.values()):
            raise SystemExit(f"backend outputs differ for {label}")
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:<18}" + "".join(f"{times[n]:>11.4f}s" for n in impls) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
