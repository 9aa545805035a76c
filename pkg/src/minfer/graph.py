"""Labeled undirected-skeleton graphs and the edge-list text format.

Every graph is stored as an undirected skeleton plus an optional label per
skeleton edge. Directed graphs label each edge relative to the canonical
``(min, max)`` orientation of its endpoints, so a reciprocal pair of arcs is a
single skeleton edge labeled ``BIDIR``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class GraphKind(str, enum.Enum):
    UNDIRECTED = "undirected"
    DIRECTED = "directed"
    SIGNED = "signed"


# Integer label codes. 0 is reserved for "no edge" in local encodings.
EDGE = 1  # undirected skeleton edge
FWD, REV, BIDIR = 1, 2, 3  # directed: min->max, max->min, both
PLUS, MINUS = 1, 2  # signed

LABEL_NAMES = {
    GraphKind.UNDIRECTED: {EDGE: "edge"},
    GraphKind.DIRECTED: {FWD: "fwd", REV: "rev", BIDIR: "bidir"},
    GraphKind.SIGNED: {PLUS: "plus", MINUS: "minus"},
}

# number of distinct pair states (including "no edge") per kind
N_STATES = {GraphKind.UNDIRECTED: 2, GraphKind.DIRECTED: 4, GraphKind.SIGNED: 3}


class GraphError(ValueError):
    """Malformed graph input (bad edge-list line, self-loop, unknown node)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def node_precedes(u: int, v: int) -> bool:
    """Return True when ``v`` comes after ``u`` in the global node order.

    The order is plain numeric order on node ids; it is strict and total.
    """
    return v > u


def flip(label: int, kind: GraphKind) -> int:
    """Label of the same edge seen from the opposite orientation."""
    if kind is GraphKind.DIRECTED and label in (FWD, REV):
        return REV if label == FWD else FWD
    return label


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable labeled graph over an undirected skeleton.

    ``labels`` maps each skeleton edge ``(u, v)`` with ``u < v`` to its integer
    label code; undirected graphs use ``EDGE`` for every edge.
    """

    kind: GraphKind
    labels: dict[tuple[int, int], int]
    adjacency: dict[int, tuple[int, ...]] = field(repr=False)
    _adjsets: dict[int, frozenset[int]] = field(repr=False)

    @classmethod
    def from_edges(
        cls,
        kind: GraphKind | str,
        edges: Iterable[tuple[int, int] | tuple[int, int, int]],
        nodes: Iterable[int] = (),
    ) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, label)`` triples.

        Labels are given relative to ``(u, v)`` as written, so ``(3, 1, FWD)``
        is the arc 3->1. Repeated pairs must agree, except that opposite
        directed arcs merge into ``BIDIR``.
        """
        kind = GraphKind(kind)
        builder = _Builder(kind)
        for e in edges:
            if len(e) == 2:
                u, v = e
                lab = EDGE if kind is GraphKind.UNDIRECTED else None
            else:
                u, v, lab = e
            if lab is None:
                raise GraphError(f"edge ({u}, {v}) needs a label for a {kind.value} graph")
            builder.add(int(u), int(v), int(lab))
        for n in nodes:
            builder.add_node(int(n))
        return builder.build()

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(self.adjacency)

    @property
    def n_nodes(self) -> int:
        return len(self.adjacency)

    @property
    def n_edges(self) -> int:
        return len(self.labels)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def neighbor_set(self, u: int) -> frozenset[int]:
        return self._adjsets[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets.get(u, ())

    def label(self, u: int, v: int) -> int:
        """Label of edge ``{u, v}`` oriented as ``u -> v``; 0 if absent."""
        if u < v:
            return self.labels.get((u, v), 0)
        return flip(self.labels.get((v, u), 0), self.kind)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Skeleton edges as ``(u, v, label)`` with ``u < v``, sorted."""
        for (u, v) in sorted(self.labels):
            yield u, v, self.labels[(u, v)]

    def __contains__(self, u: object) -> bool:
        return u in self.adjacency

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.kind is other.kind
            and self.labels == other.labels
            and set(self.adjacency) == set(other.adjacency)
        )

    def __hash__(self) -> int:
        return hash((self.kind, frozenset(self.labels.items())))

    def __repr__(self) -> str:
        return f"Graph(kind={self.kind.value}, nodes={self.n_nodes}, edges={self.n_edges})"


class _Builder:
    def __init__(self, kind: GraphKind):
        self.kind = kind
        self.labels: dict[tuple[int, int], int] = {}
        self.extra_nodes: set[int] = set()

    def add_node(self, u: int) -> None:
        if u < 0:
            raise GraphError(f"negative node id {u}")
        self.extra_nodes.add(u)

    def add(self, u: int, v: int, label: int, line: int | None = None) -> None:
        if u < 0 or v < 0:
            raise GraphError(f"negative node id in edge ({u}, {v})", line)
        if u == v:
            raise GraphError(f"self-loop on node {u}", line)
        if label not in LABEL_NAMES[self.kind]:
            raise GraphError(f"label {label} invalid for a {self.kind.value} graph", line)
        if u > v:
            u, v = v, u
            label = flip(label, self.kind)
        old = self.labels.get((u, v))
        if old is None or old == label:
            self.labels[(u, v)] = label
        elif self.kind is GraphKind.DIRECTED:
            self.labels[(u, v)] = BIDIR
        else:
            raise GraphError(f"conflicting labels for edge ({u}, {v})", line)

    def build(self) -> Graph:
        nbrs: dict[int, list[int]] = {n: [] for n in self.extra_nodes}
        for (u, v) in self.labels:
            nbrs.setdefault(u, []).append(v)
            nbrs.setdefault(v, []).append(u)
        adjacency = {n: tuple(sorted(nbrs[n])) for n in sorted(nbrs)}
        adjsets = {n: frozenset(a) for n, a in adjacency.items()}
        return Graph(self.kind, dict(self.labels), adjacency, adjsets)


# --- edge-list text format ---------------------------------------------------

_DIRECTED_TOKENS = {">": FWD, "<": REV, "=": BIDIR}
_SIGNED_TOKENS = {"+": PLUS, "-": MINUS}


def _infer_kind(fields: list[str], lineno: int) -> GraphKind:
    if len(fields) == 2:
        return GraphKind.UNDIRECTED
    if len(fields) == 3 and fields[2] in _DIRECTED_TOKENS:
        return GraphKind.DIRECTED
    if len(fields) == 3 and fields[2] in _SIGNED_TOKENS:
        return GraphKind.SIGNED
    raise GraphError(f"cannot infer graph kind from {' '.join(fields)!r}", lineno)


def parse_line(fields: list[str], kind: GraphKind, lineno: int | None = None) -> tuple[int, int, int]:
    """Decode one whitespace-split edge-list line into ``(u, v, label)``."""
    want = 2 if kind is GraphKind.UNDIRECTED else 3
    if len(fields) != want:
        raise GraphError(f"expected {want} fields for a {kind.value} edge, got {len(fields)}", lineno)
    try:
        u, v = int(fields[0]), int(fields[1])
    except ValueError:
        raise GraphError(f"non-integer node id in {' '.join(fields)!r}", lineno) from None
    if kind is GraphKind.UNDIRECTED:
        label = EDGE
    else:
        table = _DIRECTED_TOKENS if kind is GraphKind.DIRECTED else _SIGNED_TOKENS
        if fields[2] not in table:
            raise GraphError(f"bad {kind.value} label {fields[2]!r}", lineno)
        label = table[fields[2]]
    if u == v:
        raise GraphError(f"self-loop on node {u}", lineno)
    return u, v, label


def iter_edge_lines(
    lines: Iterable[str], kind: GraphKind | str | None = None
) -> Iterator[tuple[int, int, int, int]]:
    """Yield ``(u, v, label, lineno)`` from edge-list lines, skipping comments.

    When ``kind`` is None it is inferred from the first data line; the
    inferred kind is then enforced on all later lines.
    """
    kind = GraphKind(kind) if kind is not None else None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if kind is None:
            kind = _infer_kind(fields, lineno)
        u, v, lab = parse_line(fields, kind, lineno)
        yield u, v, lab, lineno


def sniff_kind(lines: Iterable[str]) -> GraphKind:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            return _infer_kind(line.split(), lineno)
    return GraphKind.UNDIRECTED


def parse_edge_list(text: str | Iterable[str], kind: GraphKind | str | None = None) -> Graph:
    """Parse an edge-list into a :class:`Graph`.

    Lines are ``u v`` (undirected), ``u v d`` with ``d`` in ``> < =``
    (directed) or ``u v s`` with ``s`` in ``+ -`` (signed). ``#`` starts a
    comment line. Raises :class:`GraphError` carrying the offending line
    number.
    """
    lines = text.splitlines() if isinstance(text, str) else list(text)
    if kind is None:
        kind = sniff_kind(lines)
    kind = GraphKind(kind)
    builder = _Builder(kind)
    for u, v, lab, lineno in iter_edge_lines(lines, kind):
        builder.add(u, v, lab, lineno)
    return builder.build()


def read_edge_list(path, kind: GraphKind | str | None = None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), kind)


def format_edge_list(g: Graph) -> str:
    """Serialize ``g`` so that :func:`parse_edge_list` reproduces it exactly.

    Isolated nodes have no edge-list representation and are dropped.
    """
    out = []
    for u, v, lab in g.edges():
        if g.kind is GraphKind.UNDIRECTED:
            out.append(f"{u} {v}")
        elif g.kind is GraphKind.DIRECTED:
            if lab == FWD:
                out.append(f"{u} {v} >")
            elif lab == REV:
                out.append(f"{v} {u} >")
            else:
                out.append(f"{u} {v} =")
        else:
            out.append(f"{u} {v} {'+' if lab == PLUS else '-'}")
    return "\n".join(out) + ("\n" if out else "")


# --- induced subgraphs -------------------------------------------------------


@dataclass(frozen=True)
class Cis:
    """A connected induced subgraph, identified by its sorted node tuple."""

    nodes: tuple[int, ...]
    code: int  # local pair-state encoding, see ``local_code``
    n_edges: int


def pair_index(k: int) -> list[tuple[int, int]]:
    """Fixed order of the node-position pairs used by local encodings."""
    return [(a, b) for a in range(k) for b in range(a + 1, k)]


def local_code(g: Graph, nodes: tuple[int, ...]) -> int:
    """Encode the labeled induced subgraph on sorted ``nodes`` as an integer.

    Digit ``t`` (base ``N_STATES[kind]``) holds the label of the ``t``-th pair
    from :func:`pair_index`, 0 when the pair is not an edge.
    """
    base = N_STATES[g.kind]
    labels = g.labels
    code = 0
    mult = 1
    k = len(nodes)
    for a in range(k):
        na = nodes[a]
        for b in range(a + 1, k):
            code += labels.get((na, nodes[b]), 0) * mult
            mult *= base
    return code


def skeleton_connected(k: int, edges: Iterable[tuple[int, int]]) -> bool:
    adj: dict[int, list[int]] = {i: [] for i in range(k)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == k


def induced_subgraph(g: Graph, nodeset: Iterable[int]) -> Cis | None:
    """Induced labeled subgraph on ``nodeset``; None when it is disconnected."""
    nodes = tuple(sorted(nodeset))
    k = len(nodes)
    if not 3 <= k <= 5:
        raise ValueError(f"subgraph size must be 3..5, got {k}")
    if len(set(nodes)) != k:
        raise ValueError(f"repeated node in {nodes}")
    for n in nodes:
        if n not in g:
            raise GraphError(f"node {n} not in graph")
    pairs = [(a, b) for a, b in pair_index(k) if g.has_edge(nodes[a], nodes[b])]
    if not skeleton_connected(k, pairs):
        return None
    return Cis(nodes, local_code(g, nodes), len(pairs))
