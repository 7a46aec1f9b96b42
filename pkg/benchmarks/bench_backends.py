#!/usr/bin/env python3
"""Compare the compiled kernel against the pure-Python fallback.

Runs identical workloads through ``gibbscut._kernel`` (Cython, int64) and
``gibbscut._kernel_py`` (pure, big-int) and prints wall times plus the
speedup.  Results are asserted equal along the way, so this doubles as a
backend equivalence check on realistic sizes.

    python benchmarks/bench_backends.py [--grid 32] [--csv out.csv]
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from array import array

from gibbscut import _kernel_py as pure
from gibbscut import kernels
from gibbscut.encode import expand_energy_model
from gibbscut.generators import random_energy_model
from gibbscut.graphcut import build_network

try:
    from gibbscut import _kernel as fast
except ImportError:
    fast = None


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def bench_table(rng, n):
    masks = sorted(rng.sample(range(1, 1 << n), min(4 * n, (1 << n) - 1)))
    coefs = [rng.randint(-50, 50) or 1 for _ in masks]
    const = rng.randint(-10, 10)

    def fast_run():
        table = fast.value_table(n, const, array("q", masks), array("q", coefs))
        return fast.min_scan(table)

    def pure_run():
        table = pure.value_table(n, const, masks, coefs)
        return pure.min_scan(table)

    return fast_run, pure_run, f"value table + min scan (n={n})"


def bench_submod_check(rng, n):
    masks = sorted(rng.sample(range(1, 1 << n), 3 * n))
    coefs = [-abs(rng.randint(1, 9)) for _ in masks]

    def fast_run():
        table = fast.value_table(n, 0, array("q", masks), array("q", coefs))
        return fast.check_submodular_table(table, n)

    def pure_run():
        table = pure.value_table(n, 0, masks, coefs)
        return pure.check_submodular_table(table, n)

    return fast_run, pure_run, f"definitional submodularity check (n={n})"


def bench_max_flow(rng, side):
    model = random_energy_model(rng, side, side, 3)
    ex = expand_energy_model(model)
    net = build_network(ex.poly)
    caps = [c for _, _, c in net.arcs]
    scaled, _ = kernels.scale_to_integers(caps)
    us = [u for u, _, _ in net.arcs]
    vs = [v for _, v, _ in net.arcs]

    def fast_run():
        return fast.max_flow(net.n_nodes, net.s, net.t, array("q", us), array("q", vs), array("q", scaled))

    def pure_run():
        return pure.max_flow(net.n_nodes, net.s, net.t, us, vs, scaled)

    label = f"max flow on {side}x{side} k=3 energy ({net.n_nodes} nodes, {len(net.arcs)} arcs)"
    return fast_run, pure_run, label


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=24, help="grid side for the flow benchmark")
    parser.add_argument("--table-n", type=int, default=18)
    parser.add_argument("--check-n", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--csv", help="also write results as CSV")
    args = parser.parse_args()

    if fast is None:
        print("compiled kernel not available; build it first (pip install -e .)")
        return 1

    rng = random.Random(args.seed)
    workloads = [
        bench_table(rng, args.table_n),
        bench_submod_check(rng, args.check_n),
        bench_max_flow(rng, args.grid),
    ]

    rows = []
    print(f"{'workload':58} {'compiled':>10} {'pure':>10} {'speedup':>8}")
    for fast_run, pure_run, label in workloads:
        fast_out, fast_s = timed(fast_run)
        pure_out, pure_s = timed(pure_run)
        if tuple(fast_out) != tuple(pure_out):
            print(f"MISMATCH on {label}: {fast_out} vs {pure_out}", file=sys.stderr)
            return 2
        speedup = pure_s / fast_s if fast_s > 0 else float("inf")
        print(f"{label:58} {fast_s:9.4f}s {pure_s:9.4f}s {speedup:7.1f}x")
        rows.append(
            {
                "workload": label,
                "compiled_s": f"{fast_s:.6f}",
                "pure_s": f"{pure_s:.6f}",
                "speedup": f"{speedup:.2f}",
            }
        )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["workload", "compiled_s", "pure_s", "speedup"])
            writer.writeheader()
            writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
