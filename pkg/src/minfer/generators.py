"""Synthetic test graphs with random direction or sign labels."""

from __future__ import annotations

import networkx as nx
import numpy as np

from .graph import BIDIR, EDGE, FWD, MINUS, PLUS, REV, Graph, GraphKind


def _labeled(skeleton: nx.Graph, kind: GraphKind | str, rng: np.random.Generator, p_bidir: float, p_plus: float) -> Graph:
    kind = GraphKind(kind)
    edges = sorted((min(u, v), max(u, v)) for u, v in skeleton.edges())
    if kind is GraphKind.UNDIRECTED:
        labs = [EDGE] * len(edges)
    elif kind is GraphKind.DIRECTED:
        r = rng.random(len(edges))
        one_way = (1 - p_bidir) / 2
        labs = np.where(r < one_way, FWD, np.where(r < 2 * one_way, REV, BIDIR)).tolist()
    else:
        labs = np.where(rng.random(len(edges)) < p_plus, PLUS, MINUS).tolist()
    return Graph.from_edges(kind, ((u, v, lab) for (u, v), lab in zip(edges, labs)), nodes=skeleton.nodes)


def erdos_renyi(n: int, p: float, kind: GraphKind | str = "undirected", seed: int = 0,
                p_bidir: float = 0.2, p_plus: float = 0.7) -> Graph:
    rng = np.random.default_rng(seed)
    skel = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))
    return _labeled(skel, kind, rng, p_bidir, p_plus)


def preferential_attachment(n: int, m: int, kind: GraphKind | str = "undirected", seed: int = 0,
                            p_bidir: float = 0.2, p_plus: float = 0.7) -> Graph:
    """Barabasi-Albert graph: each new node attaches to ``m`` existing nodes."""
    rng = np.random.default_rng(seed)
    skel = nx.barabasi_albert_graph(n, m, seed=int(rng.integers(2**31)))
    return _labeled(skel, kind, rng, p_bidir, p_plus)


def clustered_scale_free(n: int, m: int, p_triangle: float, kind: GraphKind | str = "undirected",
                         seed: int = 0, p_bidir: float = 0.2, p_plus: float = 0.7) -> Graph:
    """Holme-Kim powerlaw-cluster graph: preferential attachment plus triad closure."""
    rng = np.random.default_rng(seed)
    skel = nx.powerlaw_cluster_graph(n, m, p_triangle, seed=int(rng.integers(2**31)))
    return _labeled(skel, kind, rng, p_bidir, p_plus)
