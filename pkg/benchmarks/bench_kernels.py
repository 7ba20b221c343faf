"""Time the numba and numpy row-sum kernels on the rank-6 Weierstrass surface.

    python3 benchmarks/bench_kernels.py --primes 101 503 1009 2003
"""
import argparse
import time

import numpy as np

from ellsurf import kernels
from ellsurf.construction import rank6_to_weierstrass, solve_rank6


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[101, 503, 1009, 2003])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rhs = rank6_to_weierstrass(solve_rank6([1, 2, 3, 4, 5, 6])).rhs()
    if kernels.row_sums_numba is None:
        print("numba unavailable (or disabled); timing numpy only")
    else:
        # first call compiles (or loads the on-disk cache)
        m = rhs.mod_p_matrix(11)
        t = time.perf_counter()
        kernels.row_sums_numba(m, 11, kernels.char_table(11))
        print(f"numba warm-up: {time.perf_counter() - t:.2f}s")

    print(f"{'p':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}  agree")
    for p in args.primes:
        m = rhs.mod_p_matrix(p)
        chi = kernels.char_table(p)
        t_np, r_np = best_of(lambda: kernels.row_sums_numpy(m, p, chi), args.repeat)
        if kernels.row_sums_numba is None:
            print(f"{p:>6} {t_np:>10.4f} {'-':>10} {'-':>8}  -")
            continue
        t_nb, r_nb = best_of(lambda: kernels.row_sums_numba(m, p, chi), args.repeat)
        same = bool(np.array_equal(r_np, r_nb))
        print(f"{p:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}  {same}")


if __name__ == "__main__":
    main()
