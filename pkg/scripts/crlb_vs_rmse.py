"""Empirical RMSE of each concentration estimate next to its root Cramer-Rao bound.

Example:
    python scripts/crlb_vs_rmse.py --nodes 150 --m 3 --k 4 --p 0.2,0.5,0.8 --runs 300 --workers 4
"""

import argparse

import numpy as np

from minfer.enumeration import count_cis
from minfer.evaluation import EvalConfig, evaluate
from minfer.generators import preferential_attachment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=405)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--p", default="0.2,0.5,0.8")
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    g = preferential_attachment(args.nodes, args.m, seed=1)
    truth = count_cis(g, args.k)
    print("p\tid\tname\tomega\trmse\trcrlb\tratio")
    for p in (float(x) for x in args.p.split(",")):
        rep = evaluate(g, EvalConfig(k=args.k, p=p, runs=args.runs, seed=args.seed, workers=args.workers), truth)
        rmse = np.sqrt(rep.mse)
        for i, name in enumerate(rep.names):
            r = rep.rcrlb[i]
            ratio = rmse[i] / r if r > 0 else float("nan")
            print(f"{p}\t{i + 1}\t{name}\t{rep.omega_true[i]:.4g}\t{rmse[i]:.4g}\t{r:.4g}\t{ratio:.3f}")


if __name__ == "__main__":
    main()
