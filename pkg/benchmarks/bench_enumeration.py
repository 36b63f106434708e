"""Shell enumeration: compiled kernel vs pure-python fallback.

Times shell_vectors on growing shells of the rank-8 even unimodular lattice
and a random rank-4 form.  Run directly:

    python3 benchmarks/bench_enumeration.py

Set FOCKFORMS_NO_NUMBA=1 to confirm the fallback path is what the flag says
it is (both rows will then report the pure timing).
"""

import time

from fockforms.enumeration import numba_enabled, shell_vectors
from fockforms.linalg import RatMat
from fockforms.scalars import QQ


def e8_doubled():
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 4
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]:
        g[a][b] = g[b][a] = -2
    return RatMat.from_rows([[QQ(v) for v in row] for row in g])


def rank4():
    rows = [[4, 1, 0, -1], [1, 5, 1, 0], [0, 1, 6, 2], [-1, 0, 2, 7]]
    return RatMat.from_rows([[QQ(v) for v in row] for row in rows])


def timed(mat, target, pure):
    t0 = time.perf_counter()
    rows = shell_vectors(mat, target, pure=pure)
    return rows.shape[0], time.perf_counter() - t0


def main():
    print(f"compiled kernel available: {numba_enabled()}")
    e8 = e8_doubled()
    shell_vectors(e8, 4)  # warm the JIT outside the timings
    print(f"{'form':<8}{'target':>8}{'vectors':>10}{'compiled':>12}{'pure':>12}{'speedup':>9}")
    for name, mat, targets in (("e8", e8, (4, 12, 20, 28)),
                               ("rank4", rank4(), (20, 60, 120))):
        for target in targets:
            n_fast, t_fast = timed(mat, target, pure=False)
            n_pure, t_pure = timed(mat, target, pure=True)
            assert n_fast == n_pure
            ratio = t_pure / t_fast if t_fast > 0 else float("inf")
            print(f"{name:<8}{target:>8}{n_fast:>10}{t_fast:>11.4f}s{t_pure:>11.4f}s{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
