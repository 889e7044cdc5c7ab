"""Compare the compiled and numpy simplex kernels.

    python benchmarks/bench_backends.py [--repeat N]

Times the textile aspiration solve, a full default-grid sweep, and a batch
of random LPs on each available backend, and checks that both backends
return identical solutions.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from flpkit import ConstraintRow, LinearProgram, bundled_model_path, load_model, solve, sweep
from flpkit._backend import BACKENDS


def random_lps(count: int, n: int, m: int, seed: int = 0) -> list[LinearProgram]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        A = rng.uniform(0.1, 10, (m, n))
        b = rng.uniform(50, 100, m)
        rows = tuple(ConstraintRow(tuple(A[i]), "<=", b[i]) for i in range(m))
        out.append(LinearProgram("maximize", tuple(rng.uniform(1, 10, n)), rows))
    return out


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    model = load_model(bundled_model_path("textile"))
    aspiration = model.crisp("upper")
    small = random_lps(200, 4, 6)
    large = random_lps(10, 60, 40)
    cases = {
        "textile solve x100": lambda b: [solve(aspiration, backend=b) for _ in range(100)],
        "textile sweep 9x9": lambda b: sweep(model, backend=b),
        "200 random 4x6": lambda b: [solve(lp, backend=b) for lp in small],
        "10 random 60x40": lambda b: [solve(lp, backend=b) for lp in large],
    }
    names = sorted(BACKENDS)
    print(f"{'case':<22}" + "".join(f"{n:>12}" for n in names) + "   speedup")
    for label, fn in cases.items():
        t = {n: best_of(lambda: fn(n), args.repeat) for n in names}
        speed = f"{t['python'] / t['compiled']:8.2f}x" if "compiled" in t else "       -"
        print(f"{label:<22}" + "".join(f"{t[n] * 1e3:>10.2f}ms" for n in names) + f"  {speed}")

    if "compiled" in BACKENDS:
        same = all(solve(lp, backend="python") == solve(lp, backend="compiled") for lp in small + large)
        print(f"identical solutions across backends: {same}")


if __name__ == "__main__":
    main()
