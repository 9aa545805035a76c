"""Motif catalogs, CIS classification and the embedding counts phi.

A catalog is generated by brute force: every labeled graph on ``k`` positions
is encoded as an integer (see :func:`minfer.graph.local_code`), the connected
ones are bucketed by canonical form, and the buckets are ordered by skeleton
edge count. The same pass fills a lookup table from encoding to motif id, so
classifying a CIS is a single array index.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .graph import Cis, GraphKind, N_STATES, LABEL_NAMES, flip, pair_index, skeleton_connected

SUPPORTED = {
    (3, GraphKind.UNDIRECTED),
    (4, GraphKind.UNDIRECTED),
    (5, GraphKind.UNDIRECTED),
    (3, GraphKind.DIRECTED),
    (3, GraphKind.SIGNED),
}

LocalGraph = dict  # {(a, b): label} over positions 0..k-1 with a < b


def decode(code: int, k: int, kind: GraphKind) -> LocalGraph:
    base = N_STATES[kind]
    g = {}
    for pair in pair_index(k):
        code, lab = divmod(code, base)
        if lab:
            g[pair] = lab
    return g


def encode(g: LocalGraph, k: int, kind: GraphKind) -> int:
    base = N_STATES[kind]
    code = 0
    mult = 1
    for pair in pair_index(k):
        code += g.get(pair, 0) * mult
        mult *= base
    return code


def permute(g: LocalGraph, perm: tuple[int, ...], kind: GraphKind) -> LocalGraph:
    """Relabel position ``a`` as ``perm[a]``, keeping edge orientation."""
    out = {}
    for (a, b), lab in g.items():
        x, y = perm[a], perm[b]
        if x < y:
            out[(x, y)] = lab
        else:
            out[(y, x)] = flip(lab, kind)
    return out


def canonical_code(g: LocalGraph, k: int, kind: GraphKind) -> int:
    """Smallest encoding over all ``k!`` relabelings."""
    return min(encode(permute(g, perm, kind), k, kind) for perm in itertools.permutations(range(k)))


def arc_label(g: LocalGraph, a: int, b: int, kind: GraphKind) -> int:
    """Label of ``{a, b}`` read in the ``a -> b`` direction, 0 if absent."""
    if a < b:
        return g.get((a, b), 0)
    return flip(g.get((b, a), 0), kind)


@dataclass(frozen=True, eq=False)
class MotifCatalog:
    k: int
    kind: GraphKind
    motifs: tuple[LocalGraph, ...]
    names: tuple[str, ...]
    table: np.ndarray  # encoding -> motif id (1-based), 0 for disconnected

    @property
    def size(self) -> int:
        return len(self.motifs)

    @property
    def edge_counts(self) -> np.ndarray:
        return np.array([len(m) for m in self.motifs], dtype=np.int64)

    def id_of(self, name: str) -> int:
        return self.names.index(name) + 1

    def motif_edges(self, i: int) -> list[tuple[int, int, int]]:
        return [(a, b, lab) for (a, b), lab in sorted(self.motifs[i - 1].items())]

    def automorphisms(self, i: int) -> int:
        return _count_embeddings(self.motifs[i - 1], self.motifs[i - 1], self.k, self.kind)


_UNDIRECTED_NAMES = {
    3: {(1, 1, 2): "wedge", (2, 2, 2): "triangle"},
    4: {
        (1, 1, 2, 2): "line",
        (1, 1, 1, 3): "star",
        (2, 2, 2, 2): "cycle",
        (1, 2, 2, 3): "tailed-triangle",
        (2, 2, 3, 3): "diamond",
        (3, 3, 3, 3): "clique",
    },
    5: {
        (1, 1, 2, 2, 2): "line",
        (1, 1, 1, 1, 4): "star",
        (1, 1, 1, 2, 3): "fork",
        (2, 2, 2, 2, 2): "circle",
        (4, 4, 4, 4, 4): "clique",
    },
}


def _degrees(g: LocalGraph, k: int) -> tuple[int, ...]:
    deg = [0] * k
    for a, b in g:
        deg[a] += 1
        deg[b] += 1
    return tuple(sorted(deg))


def _describe(g: LocalGraph, kind: GraphKind) -> str:
    if kind is GraphKind.DIRECTED:
        arrows = {1: "->", 2: "<-", 3: "<->"}
        return ",".join(f"{a}{arrows[lab]}{b}" for (a, b), lab in sorted(g.items()))
    signs = {1: "+", 2: "-"}
    return ",".join(f"{a}{signs[lab]}{b}" for (a, b), lab in sorted(g.items()))


def _anchor(order: list, k: int, kind: GraphKind, reps: dict) -> list:
    """Move the explicitly numbered undirected motifs into their fixed slots."""
    if kind is not GraphKind.UNDIRECTED:
        return order
    anchors = {3: {}, 4: {"line": 1}, 5: {"line": 1, "circle": 6}}[k]
    order = list(order)
    for name, slot in anchors.items():
        pos = next(i for i, c in enumerate(order) if _UNDIRECTED_NAMES[k].get(_degrees(reps[c], k)) == name)
        order[slot - 1], order[pos] = order[pos], order[slot - 1]
    return order


@functools.lru_cache(maxsize=None)
def build_catalog(k: int, kind: GraphKind | str) -> MotifCatalog:
    """Enumerate, canonicalize and order all connected labeled ``k``-node motifs.

    Motifs are sorted by (skeleton edge count, canonical encoding). For
    undirected graphs the 4- and 5-node line is then pinned to id 1 and the
    5-node circle to id 6.
    """
    kind = GraphKind(kind)
    if (k, kind) not in SUPPORTED:
        raise ValueError(f"unsupported motif size/kind: k={k}, kind={kind.value}")
    base = N_STATES[kind]
    n_codes = base ** len(pair_index(k))
    canon_of = np.zeros(n_codes, dtype=np.int64) - 1
    reps: dict[int, LocalGraph] = {}
    for code in range(n_codes):
        g = decode(code, k, kind)
        if not skeleton_connected(k, g):
            continue
        c = canonical_code(g, k, kind)
        canon_of[code] = c
        if c not in reps:
            reps[c] = decode(c, k, kind)
    order = sorted(reps, key=lambda c: (len(reps[c]), c))
    order = _anchor(order, k, kind, reps)
    ids = {c: i + 1 for i, c in enumerate(order)}
    table = np.zeros(n_codes, dtype=np.int16)
    for code in range(n_codes):
        if canon_of[code] >= 0:
            table[code] = ids[int(canon_of[code])]
    motifs = tuple(reps[c] for c in order)
    if kind is GraphKind.UNDIRECTED:
        names = tuple(
            _UNDIRECTED_NAMES[k].get(_degrees(m, k), f"m{k}-{i + 1}") for i, m in enumerate(motifs)
        )
    else:
        names = tuple(_describe(m, kind) for m in motifs)
    return MotifCatalog(k, kind, motifs, names, table)


def classify(s: Cis, cat: MotifCatalog) -> int:
    """Motif id (1-based) of a connected induced subgraph."""
    if len(s.nodes) != cat.k:
        raise ValueError(f"CIS has {len(s.nodes)} nodes, catalog is for k={cat.k}")
    i = int(cat.table[s.code])
    if i == 0:
        raise ValueError(f"subgraph on {s.nodes} is not connected")
    return i


# --- phi --------------------------------------------------------------------


def _count_embeddings(small: LocalGraph, big: LocalGraph, k: int, kind: GraphKind) -> int:
    """Node permutations carrying every edge of ``small`` onto an equally labeled edge of ``big``."""
    count = 0
    arcs = [(a, b, lab) for (a, b), lab in small.items()]
    for x in itertools.permutations(range(k)):
        if all(arc_label(big, x[a], x[b], kind) == lab for a, b, lab in arcs):
            count += 1
    return count


def compute_phi(cat: MotifCatalog) -> np.ndarray:
    """``phi[i, j]``: number of spanning subgraphs of motif ``j`` isomorphic to motif ``i``.

    Counts label-preserving embeddings of motif ``i`` into motif ``j`` and
    divides by the automorphism count of motif ``i``; the quotient must be an
    integer.
    """
    t = cat.size
    phi = np.zeros((t, t), dtype=np.int64)
    for i, mi in enumerate(cat.motifs):
        z = _count_embeddings(mi, mi, cat.k, cat.kind)
        for j, mj in enumerate(cat.motifs):
            if len(mi) > len(mj):
                continue
            y = _count_embeddings(mi, mj, cat.k, cat.kind)
            q, r = divmod(y, z)
            if r:
                raise ArithmeticError(f"phi[{i + 1},{j + 1}]: {y} embeddings not divisible by {z} automorphisms")
            phi[i, j] = q
    return phi


def phi_by_edge_subsets(cat: MotifCatalog) -> np.ndarray:
    """Reference phi: enumerate edge subsets of each motif and classify them."""
    t = cat.size
    phi = np.zeros((t, t), dtype=np.int64)
    for j, mj in enumerate(cat.motifs):
        items = list(mj.items())
        for r in range(len(items) + 1):
            for subset in itertools.combinations(items, r):
                sub = dict(subset)
                if not skeleton_connected(cat.k, sub):
                    continue
                i = int(cat.table[encode(sub, cat.k, cat.kind)])
                phi[i - 1, j] += 1
    return phi


def label_name(kind: GraphKind, lab: int) -> str:
    return LABEL_NAMES[kind][lab]
