"""Transition matrix and the linear-inversion estimator of original motif counts.

An original CIS of motif ``j`` survives edge sampling as motif ``i`` with
probability ``P[i, j] = phi[i, j] p^e_i (1 - p)^(e_j - e_i)``, so
``E[m] = P n`` and ``n_hat = P^-1 m`` is unbiased. Catalogs are ordered by
skeleton edge count, which makes ``P`` upper triangular.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .enumeration import CountVector
from .motifs import MotifCatalog, compute_phi


class EmptySampleError(ValueError):
    """The sampled graph holds no CIS of the requested size."""


class NumericError(ArithmeticError):
    pass


class ZeroNormalizerError(NumericError):
    """Estimated counts sum to zero, so concentrations are undefined."""


# relative size below which the estimated total counts as an exact zero
NORMALIZER_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    P: np.ndarray
    p: float
    catalog: MotifCatalog

    @property
    def size(self) -> int:
        return self.P.shape[0]

    def solve(self, m: np.ndarray) -> np.ndarray:
        """``P^-1 m`` by back substitution."""
        return solve_triangular(self.P, np.asarray(m, dtype=float), lower=False, check_finite=True)

    def inverse(self) -> np.ndarray:
        """Explicit ``P^-1``; for cross-checks against tabulated matrices."""
        return np.linalg.inv(self.P)


def build_P(phi: np.ndarray, p: float, cat: MotifCatalog) -> TransitionMatrix:
    if not 0 < p <= 1:
        raise ValueError(f"p must be in (0, 1], got {p}")
    e = cat.edge_counts
    q = 1.0 - p
    # phi is zero wherever e_j < e_i, so clipping the exponent changes nothing
    diff = np.maximum(e[None, :] - e[:, None], 0).astype(float)
    P = phi * p ** e[:, None].astype(float) * q**diff
    if np.any(np.diag(P) < np.finfo(float).tiny):
        raise NumericError(f"p={p} too small: p^{e.max()} underflows; use a larger sampling probability")
    return TransitionMatrix(P, p, cat)


_phi_cached = functools.lru_cache(maxsize=None)(compute_phi)


def transition_matrix(cat: MotifCatalog, p: float) -> TransitionMatrix:
    return build_P(_phi_cached(cat), p, cat)


@dataclass
class EstimateReport:
    k: int
    kind: str
    p: float
    m: np.ndarray
    n_hat: np.ndarray
    omega_hat: np.ndarray
    rho: np.ndarray
    W: float
    condition: float
    flags: list[str] = field(default_factory=list)
    rcrlb: np.ndarray | None = None
    names: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = {
            "k": self.k,
            "kind": self.kind,
            "p": self.p,
            "m": [int(x) for x in self.m],
            "n_hat": self.n_hat.tolist(),
            "omega_hat": self.omega_hat.tolist(),
            "rho": self.rho.tolist(),
            "W": self.W,
            "condition": self.condition,
            "flags": list(self.flags),
        }
        if self.rcrlb is not None:
            d["rcrlb"] = self.rcrlb.tolist()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_tsv(self) -> str:
        head = ["id", "name", "m", "rho", "n_hat", "omega_hat"]
        if self.rcrlb is not None:
            head.append("rcrlb")
        rows = ["\t".join(head)]
        for i in range(len(self.n_hat)):
            row = [
                str(i + 1),
                self.names[i] if self.names else "",
                str(int(self.m[i])),
                repr(float(self.rho[i])),
                repr(float(self.n_hat[i])),
                repr(float(self.omega_hat[i])),
            ]
            if self.rcrlb is not None:
                row.append(repr(float(self.rcrlb[i])))
            rows.append("\t".join(row))
        return "\n".join(rows) + "\n"


def infer_counts(m: CountVector, P: TransitionMatrix, explicit_inverse: bool = False) -> EstimateReport:
    """Unbiased estimate of the original graph's motif counts from sample counts ``m``.

    Negative components of ``n_hat`` are kept as is and flagged. With
    ``explicit_inverse`` the estimate is ``inv(P) @ m`` instead of a triangular
    solve.
    """
    cat = P.catalog
    if (m.k, m.kind) != (cat.k, cat.kind):
        raise ValueError("count vector and transition matrix use different catalogs")
    total = m.total
    if total == 0:
        raise EmptySampleError(
            f"no {m.k}-node CIS in the sampled graph; a larger sampling probability is needed"
        )
    counts = m.counts.astype(float)
    n_hat = P.inverse() @ counts if explicit_inverse else P.solve(counts)
    rho = counts / total
    if not np.all(np.isfinite(n_hat)):
        raise NumericError("non-finite estimate; sampling probability too small for this k")
    s = n_hat.sum()
    # the total can cancel exactly in real arithmetic and leave a rounding residue
    if abs(s) <= NORMALIZER_RTOL * np.abs(n_hat).sum():
        raise ZeroNormalizerError("estimated counts sum to zero; concentrations undefined")
    flags = [f"negative_n_hat:{i + 1}" for i in np.flatnonzero(n_hat < 0)]
    if s < 0:
        flags.append("negative_total")
    return EstimateReport(
        k=m.k,
        kind=m.kind.value,
        p=P.p,
        m=m.counts.copy(),
        n_hat=n_hat,
        omega_hat=n_hat / s,
        rho=rho,
        W=float(s / total),
        condition=_condition(P),
        flags=flags,
        names=cat.names,
    )


def infer_concentrations(rho: np.ndarray, P: TransitionMatrix, atol: float = 1e-9) -> np.ndarray:
    """Concentration estimate from sample concentrations: ``P^-1 rho / W``."""
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (P.size,):
        raise ValueError(f"expected {P.size} concentrations, got shape {rho.shape}")
    if abs(rho.sum() - 1.0) > atol or np.any(rho < 0):
        raise ValueError("sample concentrations must be non-negative and sum to 1")
    x = P.solve(rho)
    W = x.sum()
    if W == 0:
        raise NumericError("normalizer W = 0; concentrations undefined")
    return x / W


def clamp_and_renormalize(omega_hat: np.ndarray) -> np.ndarray:
    """Presentation-only projection onto the simplex by clipping at zero.

    The result is biased; use the raw estimate for any averaging.
    """
    x = np.clip(omega_hat, 0, None)
    s = x.sum()
    return x / s if s > 0 else x


def _condition(P: TransitionMatrix) -> float:
    d = np.abs(np.diag(P.P))
    return float(d.max() / d.min())
