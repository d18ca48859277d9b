"""MIS runs over seeds and degree bounds; one CSV row per run.

``--rounds`` shortens phase 1 so that phase 2 actually has work to do.

    python3 scripts/mis_sweep.py --n 10000 --d 4 8 --seeds 5
    python3 scripts/mis_sweep.py --n 10000 --d 4 --seeds 5 --rounds 3
"""

import argparse
import time

from spacelca.entropy import Entropy
from spacelca.graph import verify_mis
from spacelca.harness.generators import gen_graph
from spacelca.mis import BOTTOM, MisContext


def main():
    p = argparse.ArgumentParser(description="MIS sweeps over seeds")
    p.add_argument("--n", type=int, default=10**4)
    p.add_argument("--d", type=int, nargs="+", default=[4, 8])
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--rounds", type=int, default=None)
    args = p.parse_args()
    print("d,seed,rounds,verdict,mis_size,survivors,max_decided_round,seconds")
    for d in args.d:
        for i in range(args.seeds):
            seed = f"{0xA5 + i:02x}"
            t0 = time.perf_counter()
            g = gen_graph(args.n, d, 1.0, Entropy(seed).child(f"graph/{d}"))
            ctx = MisContext(g, Entropy(seed).child("mis"), rounds=args.rounds)
            member = [ctx.mis_query(v).in_mis for v in range(g.n)]
            survivors = sum(ctx.phase1(v) is BOTTOM for v in range(g.n))
            last = max((ctx.decided_round(v) or 0) for v in range(g.n))
            print(
                f"{d},{seed},{ctx.rounds},{verify_mis(g, member)[0]},{sum(member)},{survivors},{last},"
                f"{time.perf_counter() - t0:.2f}"
            )


if __name__ == "__main__":
    main()
