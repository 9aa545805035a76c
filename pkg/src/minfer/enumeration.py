"""Exact 3-, 4- and 5-node CIS counting by pivoting.

Each pivot node ``u`` generates candidate node sets from its neighborhood; a
"responsible node" rule on the label-blind skeleton of each candidate makes
sure every CIS is counted by exactly one pivot, exactly once. Pivots are
independent, so the pivot set can be split across workers and the partial
count vectors summed.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Graph, GraphKind, N_STATES, pair_index
from .motifs import MotifCatalog, build_catalog

MAX_BRUTE_FORCE_SUBSETS = 10**8


@dataclass(frozen=True, eq=False)
class CountVector:
    """Per-motif CIS counts, ``counts[i - 1]`` for motif id ``i``."""

    k: int
    kind: GraphKind
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def concentrations(self) -> np.ndarray:
        total = self.total
        if total == 0:
            return np.zeros(len(self.counts))
        return self.counts / total

    def __add__(self, other: "CountVector") -> "CountVector":
        if (self.k, self.kind) != (other.k, other.kind):
            raise ValueError("cannot add count vectors of different catalogs")
        return CountVector(self.k, self.kind, self.counts + other.counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountVector):
            return NotImplemented
        return (self.k, self.kind) == (other.k, other.kind) and np.array_equal(self.counts, other.counts)

    def __repr__(self) -> str:
        return f"CountVector(k={self.k}, kind={self.kind.value}, counts={self.counts.tolist()})"


def _check(g: Graph, cat: MotifCatalog, k: int) -> None:
    if cat.k != k:
        raise ValueError(f"catalog is for k={cat.k}, expected k={k}")
    if cat.kind is not g.kind:
        raise ValueError(f"catalog kind {cat.kind.value} does not match graph kind {g.kind.value}")


def _encoder(g: Graph, k: int):
    """Return ``f(sorted_nodes) -> (code, skeleton_degrees)``."""
    labels = g.labels
    base = N_STATES[g.kind]
    pairs = [(a, b, base**t) for t, (a, b) in enumerate(pair_index(k))]

    def encode(nodes):
        code = 0
        deg = [0] * k
        for a, b, mult in pairs:
            lab = labels.get((nodes[a], nodes[b]))
            if lab:
                code += lab * mult
                deg[a] += 1
                deg[b] += 1
        return code, deg

    return encode


def _finish(g: Graph, cat: MotifCatalog, hist: list[int]) -> CountVector:
    return CountVector(cat.k, g.kind, np.array(hist[1:], dtype=np.int64))


def enumerate3(g: Graph, cat: MotifCatalog, pivots: Iterable[int] | None = None) -> CountVector:
    _check(g, cat, 3)
    table = cat.table.tolist()
    encode = _encoder(g, 3)
    adj, nset = g.adjacency, g._adjsets
    hist = [0] * (cat.size + 1)
    for u in g.nodes if pivots is None else pivots:
        nu = adj[u]
        for i, v in enumerate(nu):
            nv = nset[v]
            for w in nu[i + 1 :]:
                # triangles are counted by their lowest node only
                if w in nv and u > v:
                    continue
                code, _ = encode(sorted((u, v, w)))
                hist[table[code]] += 1
    return _finish(g, cat, hist)


def enumerate4(g: Graph, cat: MotifCatalog, pivots: Iterable[int] | None = None) -> CountVector:
    _check(g, cat, 4)
    table = cat.table.tolist()
    encode = _encoder(g, 4)
    adj, nset = g.adjacency, g._adjsets
    hist = [0] * (cat.size + 1)
    for u in g.nodes if pivots is None else pivots:
        nu = adj[u]
        su = nset[u]
        for i, v in enumerate(nu):
            sv = nset[v]
            for w in nu[i + 1 :]:
                gamma = su | sv | nset[w]
                for x in gamma:
                    if x == u or x == v or x == w:
                        continue
                    if x in su and x < w:
                        continue
                    nodes = sorted((u, v, w, x))
                    code, deg = encode(nodes)
                    # responsible: lowest node with skeleton degree >= 2
                    if next(n for n, d in zip(nodes, deg) if d >= 2) != u:
                        continue
                    hist[table[code]] += 1
    return _finish(g, cat, hist)


def enumerate5(g: Graph, cat: MotifCatalog, pivots: Iterable[int] | None = None) -> CountVector:
    _check(g, cat, 5)
    table = cat.table.tolist()
    encode = _encoder(g, 5)
    adj, nset = g.adjacency, g._adjsets
    hist = [0] * (cat.size + 1)
    for u in g.nodes if pivots is None else pivots:
        nu = adj[u]
        su = nset[u]
        for i, v in enumerate(nu):
            sv = nset[v]
            for j in range(i + 1, len(nu)):
                w = nu[j]
                sw = nset[w]
                # type 1: some skeleton node has degree >= 3
                for x in nu[j + 1 :]:
                    quad = (u, v, w, x)
                    for y in su | sv | sw | nset[x]:
                        if y in quad:
                            continue
                        if y in su and y < x:
                            continue
                        nodes = sorted((u, v, w, x, y))
                        code, deg = encode(nodes)
                        if next(n for n, d in zip(nodes, deg) if d >= 3) != u:
                            continue
                        hist[table[code]] += 1
                # type 2: 5-line centered at u, or 5-circle through u
                if w in sv:
                    continue
                # u is adjacent to both v and w, so the differences drop it
                gamma_v = sv - su - sw
                if not gamma_v:
                    continue
                gamma_w = sw - su - sv
                for x in gamma_v:
                    sx = nset[x]
                    for y in gamma_w:
                        if y in sx and u > min(v, w, x, y):
                            continue
                        code, _ = encode(sorted((u, v, w, x, y)))
                        hist[table[code]] += 1
    return _finish(g, cat, hist)


_ENUMERATORS = {3: enumerate3, 4: enumerate4, 5: enumerate5}


def count_cis(g: Graph, k: int, cat: MotifCatalog | None = None, pivots: Iterable[int] | None = None) -> CountVector:
    """Exact per-motif counts of ``k``-node CISes of ``g``."""
    if k not in _ENUMERATORS:
        raise ValueError(f"k must be 3, 4 or 5, got {k}")
    if cat is None:
        cat = build_catalog(k, g.kind)
    return _ENUMERATORS[k](g, cat, pivots)


def _count_chunk(args):
    g, k, pivots = args
    return count_cis(g, k, pivots=pivots)


def partition_pivots(g: Graph, parts: int) -> list[list[int]]:
    """Split nodes into ``parts`` groups with roughly balanced neighborhood work."""
    groups: list[list[int]] = [[] for _ in range(parts)]
    loads = [0] * parts
    for u in sorted(g.nodes, key=lambda n: -g.degree(n)):
        i = loads.index(min(loads))
        groups[i].append(u)
        loads[i] += g.degree(u) ** 2
    return groups


def count_cis_parallel(g: Graph, k: int, workers: int = 1) -> CountVector:
    """Like :func:`count_cis` but with pivots spread over ``workers`` processes."""
    if workers <= 1:
        return count_cis(g, k)
    groups = partition_pivots(g, workers)
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_count_chunk, [(g, k, grp) for grp in groups]))
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def brute_force_enumerate(g: Graph, k: int, cat: MotifCatalog | None = None, chunk: int = 1 << 18) -> CountVector:
    """Count CISes by checking every ``k``-subset of nodes. Verification oracle."""
    if cat is None:
        cat = build_catalog(k, g.kind)
    if cat.k != k or cat.kind is not g.kind:
        raise ValueError("catalog does not match graph and k")
    nodes = sorted(g.nodes)
    n = len(nodes)
    n_subsets = math.comb(n, k)
    if n_subsets > MAX_BRUTE_FORCE_SUBSETS:
        raise ValueError(f"brute force would visit {n_subsets:.3g} subsets (limit {MAX_BRUTE_FORCE_SUBSETS:.0e})")
    counts = np.zeros(cat.size + 1, dtype=np.int64)
    if n_subsets == 0:
        return CountVector(k, g.kind, counts[1:])
    pos = {u: i for i, u in enumerate(nodes)}
    lab = np.zeros((n, n), dtype=np.int64)
    for (u, v), label in g.labels.items():
        lab[pos[u], pos[v]] = label
    base = N_STATES[g.kind]
    pairs = pair_index(k)
    combos = itertools.combinations(range(n), k)
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        code = np.zeros(len(block), dtype=np.int64)
        for t, (a, b) in enumerate(pairs):
            code += lab[block[:, a], block[:, b]] * base**t
        counts += np.bincount(cat.table[code], minlength=cat.size + 1)
    return CountVector(k, g.kind, counts[1:])


def total_cis_lower_bound(g: Graph) -> int:
    """``sum_u C(deg(u), 2) - 2 * triangles``: the exact 3-node CIS count."""
    wedges_at = sum(math.comb(g.degree(u), 2) for u in g.nodes)
    triangles = 0
    for u in g.nodes:
        nu = g.adjacency[u]
        for i, v in enumerate(nu):
            if v < u:
                continue
            sv = g._adjsets[v]
            triangles += sum(1 for w in nu[i + 1 :] if w in sv)
    return wedges_at - 2 * triangles
