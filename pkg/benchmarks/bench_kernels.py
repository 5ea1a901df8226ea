"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Prints median wall time per call and the max abs difference between backends.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from mslab import kernels


def cases(rng):
    for degree, points in ((4, 4096), (10, 16384), (10, 1 << 18), (32, 1 << 16)):
        zeros = 0.95 * np.sqrt(rng.uniform(size=degree)) * np.exp(2j * np.pi * rng.uniform(size=degree))
        zeros[0] = 0.0
        z = np.exp(2j * np.pi * np.arange(points) / points)
        yield f"blaschke_product d={degree} n={points}", kernels.blaschke_product, (zeros, z)
        yield f"blaschke_log_modsq d={degree} n={points}", kernels.blaschke_log_modsq, (zeros, 0.999 * z)
        yield f"tm_table d={degree} n={points}", kernels.tm_table, (zeros, z)
    for terms in (16, 512, 8192):
        c = rng.normal(size=terms) / (1.0 + np.arange(terms)) ** 2
        z = 0.9 * np.exp(2j * np.pi * rng.uniform(size=2000))
        yield f"horner terms={terms} n=2000", kernels.horner, (c, z)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)

    impls = kernels.implementations()
    if "cython" not in impls:
        print("compiled kernels not built; timing the numpy backend only", file=sys.stderr)
    rng = np.random.default_rng(0)
    rows = []
    print(f"{'case':40s} " + " ".join(f"{name:>12s}" for name in impls) + "   speedup   max|diff|")
    for label, fn, fargs in cases(rng):
        times, outs = {}, {}
        for name, impl in impls.items():
            outs[name] = fn(*fargs, impl=impl)
            t = timeit.Timer(lambda: fn(*fargs, impl=impl))
            number = max(1, int(0.05 / max(t.timeit(1), 1e-6)))
            times[name] = min(t.repeat(args.repeat, number)) / number
        diff = max(float(np.max(np.abs(outs[k] - outs["python"]))) for k in outs)
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{label:40s} " + " ".join(f"{times[k] * 1e3:10.3f}ms" for k in impls) + f"   {speed:7.1f}x   {diff:.1e}")
        rows.append({"case": label, "seconds": times, "speedup": speed, "max_abs_diff": diff})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
