"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --sizes 50,100,200 --repeat 3
"""
import argparse
import json
import time

import numpy as np

from netdiscord import kernels, network
from netdiscord.fixtures import random_network


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", default="50,100,200")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write raw timings here")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    rng = np.random.default_rng(args.seed)
    rows = []
    for n in (int(s) for s in args.sizes.split(",")):
        net = network.make_homophilous_blocks((n // 2, n - n // 2), 0.3, 0.02, args.seed) if n >= 8 else random_network(rng, n)
        g = np.array(net.weights)
        a, f = rng.standard_normal(n), rng.standard_normal(n)
        row = {"n": n}
        for b in backends:
            row[f"jacobi_{b}"] = best_of(lambda: kernels.jacobi_eigh(g, 1e-12 * n, 100, backend=b), args.repeat)
            row[f"payoffs_{b}"] = best_of(lambda: kernels.agent_payoffs(g, a, f, 0.5, backend=b), args.repeat * 20)
        rows.append(row)

    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    head = "n".rjust(6) + "".join(f"{k:>20}" for k in rows[0] if k != "n")
    print(head)
    for r in rows:
        print(f"{r['n']:>6}" + "".join(f"{r[k]:>19.5f}s" for k in r if k != "n"))
    if "compiled" in backends:
        for r in rows:
            print(f"n={r['n']}: jacobi speedup x{r['jacobi_python'] / r['jacobi_compiled']:.1f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
