"""Time each hot kernel under the compiled and the pure-Python backend.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row checks that both backends return the same result before timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from expcong import kernels
from expcong.census import EquationInstance, count_brute, full_region
from expcong.dlog import build_table, dlog_batch
from expcong.ff import field_from_spec
from expcong.solver import solve_classical


def _time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return a == b


def cases(quick: bool):
    F = field_from_spec("65537")
    F2 = field_from_spec("3^8")
    g = F.generator
    n = 2**14 if quick else 2**16 - 1
    yield "powers F_65537", lambda: kernels.powers(F, g, n, 5)
    yield "powers F_3^8", lambda: kernels.powers(F2, F2.generator, F2.q - 1, 2)

    small = field_from_spec("101")
    inst = EquationInstance.build(small, [(3, 2), (5, 7), (1, 11)], 0)
    reg = full_region(inst)
    yield f"brute count F_101 ({reg.volume} triples)", lambda: count_brute(inst, reg)

    F3 = field_from_spec("7^3")
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, 99, F3.q), rng.integers(0, 99, F3.q)
    yield "group convolution F_7^3", lambda: kernels.group_convolve(F3, a, b)

    table = build_table(F(g), F.q - 1)
    hs = np.arange(1, 4097 if quick else F.q, dtype=np.int64)
    yield f"batched BSGS ({len(hs)} targets)", lambda: dlog_batch(table, hs)

    # all terms live in the half-degree subfield and b does not, so the whole grid is scanned
    nu = 8 if quick else 12
    E = field_from_spec(f"2^{nu}")
    h = E.pow(E.generator, 2 ** (nu // 2) + 1)
    inst = EquationInstance.build(E, [(1, h)] * 3, E.generator)
    yield f"full-scan solve F_2^{nu} (no solution)", lambda: solve_classical(inst, full_scan=True).giant_steps


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()
    if not kernels.COMPILED_AVAILABLE:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'kernel':<40} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>9}")
    for name, fn in cases(args.quick):
        with kernels.use_backend("python"):
            tp, rp = _time(fn, args.repeat)
        with kernels.use_backend("compiled"):
            tc, rc = _time(fn, args.repeat)
        if not _same(rp, rc):
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:<40} {tp:>12.4f} {tc:>13.4f} {tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
