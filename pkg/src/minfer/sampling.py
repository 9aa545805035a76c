"""Random edge sampling: seeded Bernoulli coins or a symmetric universal hash.

Skeleton edges are the sampling unit, so the two arcs of a reciprocal directed
pair are always kept or dropped together and every kept edge carries its
original label unchanged.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np
import sympy

from .graph import Graph, GraphKind, _Builder, iter_edge_lines, sniff_kind

DEFAULT_RHO = 1 << 20


class SamplerConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    """Edge sampling parameters.

    ``mode="bernoulli"`` draws one coin per skeleton edge from a Philox stream
    keyed by ``seed``. ``mode="hash"`` keeps edge ``{u, v}`` iff
    ``tau(u, v) < ceil(rho * p)`` with
    ``tau(u, v) = ((a * (min * delta + max) + b) mod gamma) mod rho``.
    """

    p: float
    mode: str = "bernoulli"
    seed: int = 0
    a: int | None = None
    b: int | None = None
    gamma: int | None = None
    rho: int = DEFAULT_RHO
    delta: int | None = None

    def __post_init__(self):
        if not (0 < self.p <= 1):
            raise SamplerConfigError(f"p must be in (0, 1], got {self.p}")
        if self.mode not in ("bernoulli", "hash"):
            raise SamplerConfigError(f"unknown sampler mode {self.mode!r}")
        if self.mode == "hash":
            self._check_hash()

    def _check_hash(self) -> None:
        missing = [n for n in ("a", "b", "gamma", "delta") if getattr(self, n) is None]
        if missing:
            raise SamplerConfigError(f"hash mode needs {', '.join(missing)}")
        if self.rho < 1:
            raise SamplerConfigError("rho must be positive")
        if not 1 <= self.a <= self.rho - 1:
            raise SamplerConfigError(f"a must be in 1..rho-1, got {self.a}")
        if not 0 <= self.b <= self.rho - 1:
            raise SamplerConfigError(f"b must be in 0..rho-1, got {self.b}")
        if self.delta < 1:
            raise SamplerConfigError("delta must be positive")
        if self.gamma <= self.delta**2 or not sympy.isprime(self.gamma):
            raise SamplerConfigError(f"gamma must be a prime larger than delta^2 = {self.delta**2}")
        if self.gamma < self.rho:
            warnings.warn("gamma < rho: hash values cannot cover 0..rho-1", stacklevel=3)

    @property
    def threshold(self) -> int:
        """Hash values below this are kept."""
        return math.ceil(self.rho * self.p)

    @property
    def effective_p(self) -> float:
        """Exact keep probability: ``p`` itself, or ``ceil(rho p) / rho`` for the hash."""
        if self.mode == "hash":
            return self.threshold / self.rho
        return self.p

    @classmethod
    def hashed(cls, p: float, delta: int, seed: int = 0, rho: int = DEFAULT_RHO, gamma: int | None = None) -> "SamplerConfig":
        """Hash config with ``a``, ``b`` drawn from ``seed``.

        The default ``gamma`` is the first prime above ``max(delta^2, 2^40)``
        so that the final ``mod rho`` is close to uniform.
        """
        if gamma is None:
            gamma = int(sympy.nextprime(max(delta * delta, 1 << 40)))
        rng = np.random.Generator(np.random.Philox(seed))
        a = int(rng.integers(1, rho))
        b = int(rng.integers(0, rho))
        return cls(p=p, mode="hash", seed=seed, a=a, b=b, gamma=gamma, rho=rho, delta=delta)


def tau(u: int, v: int, cfg: SamplerConfig) -> int:
    """Symmetric universal hash of the unordered pair ``{u, v}`` into ``[0, rho)``."""
    if cfg.mode != "hash":
        raise SamplerConfigError("tau needs a hash-mode config")
    if u >= cfg.delta or v >= cfg.delta:
        raise ValueError(f"node id {max(u, v)} is not below delta = {cfg.delta}")
    lo, hi = (u, v) if u < v else (v, u)
    return ((cfg.a * (lo * cfg.delta + hi) + cfg.b) % cfg.gamma) % cfg.rho


def bernoulli_mask(n_edges: int, p: float, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.random(n_edges) < p


def sample_graph(g: Graph, cfg: SamplerConfig) -> Graph:
    """RESampled graph: every skeleton edge kept independently, labels intact.

    Only endpoints of kept edges appear in the result.
    """
    edges = list(g.edges())
    if cfg.p == 1:
        keep = [True] * len(edges)
    elif cfg.mode == "bernoulli":
        keep = bernoulli_mask(len(edges), cfg.p, cfg.seed).tolist()
    else:
        thr = cfg.threshold
        keep = [tau(u, v, cfg) < thr for u, v, _ in edges]
    return Graph.from_edges(g.kind, (e for e, k in zip(edges, keep) if k))


def sample_stream(
    edges: Iterable[tuple[int, int, int]], cfg: SamplerConfig, kind: GraphKind | str = GraphKind.UNDIRECTED
) -> Graph:
    """Sample a stream of ``(u, v, label)`` edges one at a time with the hash.

    Each decision depends only on the pair, so the result matches
    :func:`sample_graph` on the aggregated graph regardless of stream order.
    """
    if cfg.mode != "hash":
        raise SamplerConfigError("stream sampling requires hash mode")
    builder = _Builder(GraphKind(kind))
    thr = cfg.threshold
    for u, v, lab in edges:
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        if cfg.p == 1 or tau(u, v, cfg) < thr:
            builder.add(u, v, lab)
    return builder.build()


def sample_lines(lines: Iterable[str], cfg: SamplerConfig, kind: GraphKind | str | None = None) -> Graph:
    """Stream-sample edge-list text lines, consuming them incrementally."""
    it = iter(lines)
    if kind is None:
        # peek at the first data line without materializing the stream
        head = []
        for line in it:
            head.append(line)
            s = line.strip()
            if s and not s.startswith("#"):
                break
        kind = sniff_kind(head)
        it = itertools.chain(head, it)
    kind = GraphKind(kind)
    return sample_stream(((u, v, lab) for u, v, lab, _ in iter_edge_lines(it, kind)), cfg, kind)


def with_seed(cfg: SamplerConfig, seed: int) -> SamplerConfig:
    """Same sampler with a new seed; hash parameters are redrawn from it."""
    if cfg.mode == "hash":
        return SamplerConfig.hashed(cfg.p, cfg.delta, seed=seed, rho=cfg.rho, gamma=cfg.gamma)
    return replace(cfg, seed=seed)
