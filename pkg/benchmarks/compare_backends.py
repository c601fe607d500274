"""Time the float counting kernel and the Jacobi oracle with and without numba.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``COTREE_SPECTRA_NO_NUMBA``.

    python benchmarks/compare_backends.py --sizes 1e3,1e4,1e5
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

WORKER = "--worker"


def _worker(sizes, jacobi_n):
    from cotree_spectra import USE_NUMBA
    from cotree_spectra.bench import bench
    from cotree_spectra.oracle import adjacency, eigenvalues_float
    from cotree_spectra.graph import to_graph
    from cotree_spectra.cotree import random_cotree

    rows = [
        {"kernel": "counts", "n": r.n, "seconds": r.seconds, "per_leaf_ns": r.per_leaf_ns}
        for r in bench(sizes, "float", "pk2", repeat=3)
    ]
    a = adjacency(to_graph(random_cotree(jacobi_n, seed=1)))
    eigenvalues_float(a[:4, :4])  # compile
    t0 = time.perf_counter()
    eigenvalues_float(a)
    rows.append({"kernel": "jacobi", "n": jacobi_n, "seconds": time.perf_counter() - t0, "per_leaf_ns": None})
    print(json.dumps({"numba": USE_NUMBA, "rows": rows}))


def _run(disable, sizes, jacobi_n):
    env = dict(os.environ)
    if disable:
        env["COTREE_SPECTRA_NO_NUMBA"] = "1"
    else:
        env.pop("COTREE_SPECTRA_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, __file__, WORKER, ",".join(map(str, sizes)), str(jacobi_n)],
        env=env, check=True, capture_output=True, text=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    if len(sys.argv) > 1 and sys.argv[1] == WORKER:
        _worker([int(s) for s in sys.argv[2].split(",")], int(sys.argv[3]))
        return
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1e3,1e4,1e5")
    ap.add_argument("--jacobi-n", type=int, default=64)
    args = ap.parse_args()
    sizes = [int(float(s)) for s in args.sizes.split(",")]

    fast = _run(False, sizes, args.jacobi_n)
    slow = _run(True, sizes, args.jacobi_n)
    print(f"{'kernel':<8} {'n':>9} {'numba s':>11} {'python s':>11} {'speedup':>9}")
    for f, s in zip(fast["rows"], slow["rows"]):
        speedup = s["seconds"] / f["seconds"] if f["seconds"] > 0 else np.inf
        print(f"{f['kernel']:<8} {f['n']:>9} {f['seconds']:>11.5f} {s['seconds']:>11.5f} {speedup:>8.1f}x")
    if not fast["numba"]:
        print("note: numba unavailable, both columns ran without it")


if __name__ == "__main__":
    main()
