"""Coloring runs over many seeds on the k-uniform cycle; one CSV row per seed.

    python3 scripts/coloring_sweep.py --N 1000 --k 19 --params 7,7,5 --seeds 20
"""

import argparse
import time
import warnings
from collections import Counter

import numpy as np

from spacelca.coloring import ColoringContext, ColoringParams
from spacelca.entropy import Entropy
from spacelca.harness.drivers import sweep
from spacelca.harness.generators import gen_hypergraph_cycle
from spacelca.hypergraph import verify_coloring


def main():
    p = argparse.ArgumentParser(description="Coloring sweeps over seeds")
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--k", type=int, default=19)
    p.add_argument("--params", default="7,7,5", help="k1,k2,k3")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--c2", type=int, default=16)
    args = p.parse_args()
    k1, k2, k3 = map(int, args.params.split(","))
    h = gen_hypergraph_cycle(args.N, args.k)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = ColoringParams(k1, k2, k3, c2=args.c2)
    print("seed,verdict,fails,phase1,phase2,phase3,tree_p99,examined_p99,examined_max,seconds")
    for i in range(args.seeds):
        seed = f"{0xA5 + i:02x}"
        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ctx = ColoringContext(h, params, Entropy(seed).child("color"))
        answers = list(sweep(ctx, range(h.m)).values())
        fails = sum(not a.ok for a in answers)
        verdict = fails == 0 and verify_coloring(h, [a.color for a in answers])[0]
        phases = Counter(a.phase for a in answers if a.ok)
        ex = np.array([a.examined for a in answers])
        tree = np.array([a.tree_size for a in answers])
        print(
            f"{seed},{verdict},{fails},{phases[1]},{phases[2]},{phases[3]},{np.percentile(tree, 99):.0f},"
            f"{np.percentile(ex, 99):.0f},{ex.max()},{time.perf_counter() - t0:.2f}"
        )


if __name__ == "__main__":
    main()
