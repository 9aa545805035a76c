"""NRMSE of the concentration estimates over a grid of sampling probabilities.

Example:
    python scripts/nrmse_trend.py --nodes 405 --m 5 --p 0.01,0.02,0.05,0.1 --runs 1000
"""

import argparse
import json

from minfer.enumeration import count_cis
from minfer.evaluation import EvalConfig, evaluate
from minfer.generators import clustered_scale_free, preferential_attachment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=405)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--triad", type=float, default=None, help="triad-closure probability (clustered graph)")
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--p", default="0.01,0.02,0.05,0.1,0.2")
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    if args.triad is None:
        g = preferential_attachment(args.nodes, args.m, seed=1)
    else:
        g = clustered_scale_free(args.nodes, args.m, args.triad, seed=1)
    truth = count_cis(g, args.k)
    print(json.dumps({"nodes": g.n_nodes, "edges": g.n_edges, "counts": truth.counts.tolist()}))
    print("p\tempty_runs\tundefined_runs\t" + "\t".join(f"nrmse_{i + 1}" for i in range(len(truth.counts))))
    for p in (float(x) for x in args.p.split(",")):
        cfg = EvalConfig(k=args.k, p=p, runs=args.runs, seed=args.seed, workers=args.workers)
        rep = evaluate(g, cfg, truth)
        cells = ["NA" if x is None else f"{x:.4g}" for x in rep.nrmse]
        print(f"{p}\t{rep.empty_runs}\t{rep.undefined_runs}\t" + "\t".join(cells))


if __name__ == "__main__":
    main()
