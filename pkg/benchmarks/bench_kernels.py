"""Compare the compiled and numpy kernels on component labelling and the sampler.

    python benchmarks/bench_kernels.py [--repeat 3] [--large]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from acgraphs import catalog, kernels
from acgraphs.acgraph import MoveAlphabet, components
from acgraphs.blackbox import WalkState, sample_elements

CASES = [("Z5xZ5", 2), ("A5", 2), ("SL(2,5)", 2), ("A5", 3), ("A4xZ7xZ7", 2)]
LARGE = [("SL(2,5)", 3)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--large", action="store_true", help="include SL(2,5), k=3 (1.7M vertices)")
    args = ap.parse_args()
    backends = kernels.available()
    print(f"backends: {backends}")
    print(f"{'case':18s} {'vertices':>10s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, k in CASES + (LARGE if args.large else []):
        G = catalog.get(name)
        row, tables = [], []
        for b in backends:
            t, T = best_of(lambda: components(G, k, backend=b), args.repeat)
            row.append(t)
            tables.append(T)
        assert all(T == tables[0] for T in tables), "backends disagree"
        speed = f"{row[backends.index('python')] / row[backends.index('cython')]:8.1f}x" if len(row) > 1 else ""
        print(f"{name + ' k=' + str(k):18s} {tables[0].vertex_count:10d} "
              + " ".join(f"{t:9.3f}s" for t in row) + "  " + speed)

    G = catalog.get("A5")
    alphabet = MoveAlphabet.for_group(G)
    row, streams = [], []
    for b in backends:
        def run():
            s = WalkState.start((G.generators[0], G.generators[1], 0), alphabet, 1, backend=b)
            return sample_elements(s, 1000, 60000, 10)
        t, out = best_of(run, args.repeat)
        row.append(t)
        streams.append(out)
    assert all(np.array_equal(s, streams[0]) for s in streams), "sampler streams differ"
    print(f"{'sampler A5 k=3':18s} {60000:10d} " + " ".join(f"{t:9.3f}s" for t in row))


if __name__ == "__main__":
    main()
