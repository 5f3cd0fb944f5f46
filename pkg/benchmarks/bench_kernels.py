"""Compare the numba and pure-numpy min-sum kernels on preset problems.

    python benchmarks/bench_kernels.py --preset bb72 bb144 --iters 100 --repeat 20

Both kernels run the same syndromes for a fixed iteration count (the
syndromes are chosen so BP does not converge early); outputs are checked for
bit-identity before timing is reported.
"""

import argparse
import time

import numpy as np

from qldpc_beam import kernels
from qldpc_beam.bp import MSG_MAX, initial_messages
from qldpc_beam.codes import preset_problem
from qldpc_beam.problem import syndrome_of


def _args(problem, s, iters):
    tg = problem.tanner
    return (tg.col_ptr, tg.edge_row, tg.edge_col, tg.row_ptr, tg.row_edges, problem.prior_llr,
            initial_messages(problem), np.zeros(problem.N, np.uint8), s, iters, MSG_MAX, 1.0)


def hard_syndromes(problem, count, iters, seed):
    """Syndromes on which BP runs the full ``iters`` iterations."""
    rng = np.random.default_rng(seed)
    found = []
    while len(found) < count:
        s = syndrome_of(problem, (rng.random(problem.N) < 2 * problem.p).astype(np.uint8))
        if not kernels.minsum_numpy(*_args(problem, s, iters))[0]:
            found.append(s)
    return found


def time_kernel(fn, problem, syndromes, iters, repeat):
    fn(*_args(problem, syndromes[0], iters))  # compile / warm caches
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for s in syndromes:
            fn(*_args(problem, s, iters))
        best = min(best, time.perf_counter() - t0)
    return best / (len(syndromes) * iters)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", nargs="+", default=["bb72", "bb144", "hgp450"])
    ap.add_argument("--noise", type=float, default=0.05)
    ap.add_argument("--iters", type=int, default=100)
    ap.add_argument("--syndromes", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if not kernels.HAVE_NUMBA:
        print("numba disabled or missing; timing the numpy kernel only")
    print(f"{'preset':>8} {'edges':>7} {'numpy us/it':>12} {'numba us/it':>12} {'speedup':>8}")
    for name in args.preset:
        _, problem = preset_problem(name, args.noise)
        syndromes = hard_syndromes(problem, args.syndromes, args.iters, seed=0)
        t_np = time_kernel(kernels.minsum_numpy, problem, syndromes, args.iters, args.repeat)
        if kernels.HAVE_NUMBA:
            a = kernels.minsum_loops(*_args(problem, syndromes[0], args.iters))
            b = kernels.minsum_numpy(*_args(problem, syndromes[0], args.iters))
            assert all(np.array_equal(x, y, equal_nan=True) for x, y in zip(a[2:], b[2:])), "kernels disagree"
            t_nb = time_kernel(kernels.minsum_loops, problem, syndromes, args.iters, args.repeat)
            print(f"{name:>8} {problem.tanner.num_edges:>7} {t_np * 1e6:>12.2f} {t_nb * 1e6:>12.2f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{name:>8} {problem.tanner.num_edges:>7} {t_np * 1e6:>12.2f} {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
