"""Compiled vs pure-Python labeling kernel on F* and group-labeling problems.

Both backends must return the same status, labels and node count for a
given seed; the script stops with an error if they do not.

    python benchmarks/bench_kernel.py [--repeat 3] [--seed 1]
"""
import argparse
import sys
import time

from oberwolfach.instances import parse_cycle_type
from oberwolfach.kernels import BACKENDS, solve_labeling
from oberwolfach.one_rotational import _kernel_problem, reduce_to_fstar
from oberwolfach.two_rotational_odd import blp_solve_patterns, build_group_problem

FSTAR = ["3^2,4^2,5,6", "3^4,6,7,8^2", "3^2,4,5^2,6,23", "4^2,5,8,14^2"]
GROUP = ["5^2,7,9^2", "3,6^2,10^2", "3^4,5^2,6,7,8", "4^2,8,9,18"]


def problems():
    for text in FSTAR:
        prob, _, _ = _kernel_problem(reduce_to_fstar(parse_cycle_type(text)), None)
        yield f"F* {text}", prob
    for text in GROUP:
        ct = parse_cycle_type(text)
        prob, _ = build_group_problem(blp_solve_patterns(ct), ct.order // 2)
        yield f"GLP {text}", prob


def timed(prob, backend, seed, repeat):
    best, res = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = solve_labeling(prob, seed=seed, backend=backend)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return res, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if "compiled" not in BACKENDS:
        print("compiled kernel not built; only the Python backend is available", file=sys.stderr)
        return 1
    print(f"{'problem':<22} {'status':<10} {'nodes':>9} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for name, prob in problems():
        rc, tc = timed(prob, "compiled", args.seed, args.repeat)
        rp, tp = timed(prob, "python", args.seed, 1)
        if (rc.status, rc.labels, rc.nodes) != (rp.status, rp.labels, rp.nodes):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<22} {rc.status.name:<10} {rc.nodes:>9} {tc:>11.4f} {tp:>10.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
