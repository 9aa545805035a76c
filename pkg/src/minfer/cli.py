"""Command-line entry point: ``minfer {sample,enumerate,infer,bound,eval,catalog}``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .bounds import fisher_and_crlb
from .enumeration import count_cis_parallel
from .evaluation import EvalConfig, evaluate
from .graph import GraphError, GraphKind, format_edge_list, iter_edge_lines, read_edge_list, sniff_kind
from .inference import EmptySampleError, NumericError, clamp_and_renormalize, infer_counts, transition_matrix
from .motifs import build_catalog
from .sampling import DEFAULT_RHO, SamplerConfig, SamplerConfigError, sample_graph, sample_lines

log = logging.getLogger("minfer")

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _kind(args, path: str | None = None) -> GraphKind:
    if args.kind:
        return GraphKind(args.kind)
    if path:
        with open(path, encoding="utf-8") as fh:
            return sniff_kind(fh)
    return GraphKind.UNDIRECTED


def _load(args):
    if not args.input:
        raise UsageError("--input is required")
    return read_edge_list(args.input, _kind(args, args.input))


def _hash_params(text: str) -> dict:
    try:
        a, b, gamma, rho, delta = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError("--hash-params expects five integers a,b,gamma,rho,delta") from None
    return dict(a=a, b=b, gamma=gamma, rho=rho, delta=delta)


def _max_node(path: str, kind: GraphKind) -> int:
    with open(path, encoding="utf-8") as fh:
        return max((max(u, v) for u, v, _, _ in iter_edge_lines(fh, kind)), default=0)


def cmd_sample(args) -> int:
    if args.p is None:
        raise UsageError("--p is required")
    p = float(args.p)
    if args.mode == "hash":
        if not args.input:
            raise UsageError("--input is required")
        kind = _kind(args, args.input)
        if args.hash_params:
            cfg = SamplerConfig(p=p, mode="hash", **_hash_params(args.hash_params))
        else:
            cfg = SamplerConfig.hashed(p, _max_node(args.input, kind) + 1, seed=args.seed, rho=args.rho)
        with open(args.input, encoding="utf-8") as fh:
            gs = sample_lines(fh, cfg, kind)
    else:
        g = _load(args)
        cfg = SamplerConfig(p=p, mode="bernoulli", seed=args.seed)
        gs = sample_graph(g, cfg)
    _emit(format_edge_list(gs), args.out)
    side = {
        "p": cfg.p,
        "effective_p": cfg.effective_p,
        "mode": cfg.mode,
        "seed": cfg.seed,
        "kind": gs.kind.value,
        "nodes": gs.n_nodes,
        "edges": gs.n_edges,
    }
    if cfg.mode == "hash":
        side.update(a=cfg.a, b=cfg.b, gamma=cfg.gamma, rho=cfg.rho, delta=cfg.delta)
    if args.out not in (None, "-"):
        with open(args.out + ".json", "w", encoding="utf-8") as fh:
            json.dump(side, fh, indent=2)
    else:
        log.info("sampler: %s", json.dumps(side))
    return 0


def cmd_enumerate(args) -> int:
    g = _load(args)
    cat = build_catalog(args.k, g.kind)
    cv = count_cis_parallel(g, args.k, workers=args.workers)
    if args.format == "json":
        text = json.dumps({"k": args.k, "kind": g.kind.value, "counts": cv.counts.tolist(),
                           "total": cv.total, "names": list(cat.names)}, indent=2) + "\n"
    else:
        text = "id\tname\tcount\n" + "".join(
            f"{i + 1}\t{cat.names[i]}\t{int(c)}\n" for i, c in enumerate(cv.counts))
    _emit(text, args.out)
    return 0


def cmd_infer(args) -> int:
    if args.p is None:
        raise UsageError("--p is required: the sampling probability must be known")
    g = _load(args)
    cat = build_catalog(args.k, g.kind)
    P = transition_matrix(cat, float(args.p))
    m = count_cis_parallel(g, args.k, workers=args.workers)
    rep = infer_counts(m, P, explicit_inverse=args.explicit_inverse)
    n_total = rep.n_hat.sum()
    if n_total > 0:
        # plug-in bound: estimated omega and n stand in for the unknown truth
        omega = clamp_and_renormalize(rep.omega_hat)
        rep.rcrlb = fisher_and_crlb(P, omega, n_total).rcrlb
        rep.flags.append("plugin_bound")
    _emit(rep.to_json() + "\n" if args.format == "json" else rep.to_tsv(), args.out)
    return 0


def cmd_bound(args) -> int:
    if args.p is None:
        raise UsageError("--p is required")
    if args.input:
        g = _load(args)
        truth = count_cis_parallel(g, args.k, workers=args.workers)
        if truth.total == 0:
            raise EmptySampleError(f"graph has no {args.k}-node CIS")
        kind, omega, n_total = g.kind, truth.concentrations(), truth.total
    else:
        if args.omega is None or args.n_total is None:
            raise UsageError("give --input, or both --omega and --n-total")
        kind = GraphKind(args.kind or "undirected")
        omega = np.array([float(x) for x in args.omega.split(",")])
        n_total = args.n_total
    cat = build_catalog(args.k, kind)
    rep = fisher_and_crlb(transition_matrix(cat, float(args.p)), omega, n_total)
    if args.format == "json":
        text = rep.to_json() + "\n"
    else:
        text = "id\tname\tomega\tP0\tcrlb\trcrlb\n" + "".join(
            f"{i + 1}\t{cat.names[i]}\t{float(omega[i])!r}\t{float(rep.P0[i])!r}\t"
            f"{float(rep.crlb[i])!r}\t{float(rep.rcrlb[i])!r}\n"
            for i in range(cat.size))
    _emit(text, args.out)
    return 0


def cmd_eval(args) -> int:
    if args.p is None:
        raise UsageError("--p is required")
    g = _load(args)
    ps = [float(x) for x in str(args.p).split(",")]
    truth = count_cis_parallel(g, args.k, workers=args.workers)
    reports = []
    for p in ps:
        cfg = EvalConfig(k=args.k, p=p, runs=args.runs, mode=args.mode, seed=args.seed,
                         rho=args.rho, workers=args.workers)
        reports.append(evaluate(g, cfg, truth))
    if args.format == "json":
        body = [json.loads(r.to_json()) for r in reports]
        text = json.dumps(body[0] if len(body) == 1 else body, indent=2) + "\n"
    else:
        parts = []
        for r in reports:
            tsv = r.to_tsv().splitlines()
            if not parts:
                parts.append("p\t" + tsv[0])
            parts += [f"{r.p!r}\t{row}" for row in tsv[1:]]
        text = "\n".join(parts) + "\n"
    _emit(text, args.out)
    return 0


def cmd_catalog(args) -> int:
    kind = GraphKind(args.kind or "undirected")
    cat = build_catalog(args.k, kind)
    rows = []
    for i in range(1, cat.size + 1):
        rows.append({
            "id": i,
            "name": cat.names[i - 1],
            "edges": [[a, b, lab] for a, b, lab in cat.motif_edges(i)],
            "skeleton_edges": int(cat.edge_counts[i - 1]),
            "automorphisms": cat.automorphisms(i),
        })
    if args.format == "json":
        text = json.dumps({"k": cat.k, "kind": kind.value, "motifs": rows}, indent=2) + "\n"
    else:
        text = "id\tname\tskeleton_edges\tautomorphisms\tedges\n" + "".join(
            f"{r['id']}\t{r['name']}\t{r['skeleton_edges']}\t{r['automorphisms']}\t"
            + " ".join(f"{a}-{b}:{lab}" for a, b, lab in r["edges"]) + "\n"
            for r in rows)
    _emit(text, args.out)
    return 0


COMMANDS = {
    "sample": cmd_sample,
    "enumerate": cmd_enumerate,
    "infer": cmd_infer,
    "bound": cmd_bound,
    "eval": cmd_eval,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minfer", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="edge-list file")
        sp.add_argument("--kind", choices=[k.value for k in GraphKind])
        sp.add_argument("--k", type=int, choices=[3, 4, 5], default=3)
        sp.add_argument("--p", help="sampling probability (eval accepts a comma list)")
        sp.add_argument("--runs", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--mode", choices=["bernoulli", "hash"], default="bernoulli")
        sp.add_argument("--hash-params", help="a,b,gamma,rho,delta")
        sp.add_argument("--rho", type=int, default=DEFAULT_RHO, help="hash range when parameters are derived")
        sp.add_argument("--format", choices=["json", "tsv"], default="json")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--workers", type=int, default=1)
        if name == "infer":
            sp.add_argument("--explicit-inverse", action="store_true")
        if name == "bound":
            sp.add_argument("--omega", help="comma-separated true concentrations")
            sp.add_argument("--n-total", type=float)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"minfer: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, ArithmeticError) as e:
        print(f"minfer: numeric error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GraphError, EmptySampleError, SamplerConfigError, ValueError, OSError) as e:
        print(f"minfer: data error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
