"""Compare the compiled and pure-Python double precision kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each kernel is timed on the workload it sees inside the package: the Hardy Z
scan that brackets zeros, zeta along a vertical line for the contour audit,
and the cosine series of the Laplace density.
"""

import argparse
import json
import sys
import timeit

import numpy as np

from zetapfrac import kernels


def workloads():
    scan = np.arange(0.0, 240.0, 0.05)
    line = np.linspace(200.0, 240.0, 2000)
    ys = np.linspace(-10.0, 0.0, 20000)
    rng = np.random.default_rng(0)
    coeffs = rng.normal(size=100) * 1e-3
    freqs = np.sort(rng.uniform(14, 240, size=100))
    return {
        "hardy_z": lambda k: k.hardy_z(scan),
        "zeta_line": lambda k: k.zeta_line(0.5, line),
        "cosine_series": lambda k: k.cosine_series(ys, coeffs, freqs),
    }


def bench(repeat: int):
    names = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    rows = []
    for task, fn in workloads().items():
        row = {"kernel": task}
        for name in names:
            k = kernels.get_backend(name)
            fn(k)  # warm up
            row[name] = min(timeit.repeat(lambda: fn(k), number=1, repeat=repeat))
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None, help="also write the timings to this file")
    args = ap.parse_args(argv)
    if kernels.BACKEND != "cython":
        print("compiled kernels unavailable; timing the Python fallback only", file=sys.stderr)
    rows = bench(args.repeat)
    print(f"{'kernel':<15}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for r in rows:
        cy = f"{r['cython']:12.4f}" if "cython" in r else f"{'-':>12}"
        sp = f"{r['speedup']:9.1f}x" if "speedup" in r else f"{'-':>10}"
        print(f"{r['kernel']:<15}{r['python']:12.4f}{cy}{sp}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
