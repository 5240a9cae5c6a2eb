"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3] [--max-t 11]

Enumeration cost grows with the Bell number of t, roughly 5x per extra
vertex at this size.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from occlust import _kernels
from occlust.instance import gen_random


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--min-t", type=int, default=8)
    ap.add_argument("--max-t", type=int, default=11)
    ap.add_argument("--ls-n", type=int, nargs="*", default=[20, 40, 80])
    args = ap.parse_args(argv)

    backends = _kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available")
    names = sorted(backends)
    print(f"{'kernel':<24}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")

    for t in range(args.min_t, args.max_t + 1):
        s = gen_random(t, 0.5, t).sign_matrix
        secs = {n: best_of(lambda: backends[n].enumerate_best(s), args.repeat) for n in names}
        _row(f"enumerate t={t}", secs)

    rng = np.random.default_rng(0)
    for n in args.ls_n:
        s = gen_random(n, 0.5, n).sign_matrix
        starts = [rng.integers(0, n, size=n).tolist() for _ in range(5)]

        def run(name):
            for start in starts:
                backends[name].local_search(s, start)
        secs = {name: best_of(lambda: run(name), args.repeat) for name in names}
        _row(f"local search n={n} x5", secs)
    return 0


def _row(label: str, secs: dict[str, float]) -> None:
    cells = "".join(f"{v * 1000:>10.1f}ms" for _, v in sorted(secs.items()))
    speed = ""
    if "compiled" in secs and "python" in secs:
        speed = f"{secs['python'] / max(secs['compiled'], 1e-9):>9.1f}x"
    print(f"{label:<24}{cells}{speed}")


if __name__ == "__main__":
    raise SystemExit(main())
