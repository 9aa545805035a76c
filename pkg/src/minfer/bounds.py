"""Evaporation probabilities, Fisher information and Cramer-Rao bounds.

A random original CIS ends up in the sample as motif ``i`` with probability
``xi_i = (P omega)_i`` or evaporates with probability ``xi_0``. Treating the
CISes as independent draws from that categorical outcome gives a Fisher
information of ``n_total * J`` for the concentration vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .inference import TransitionMatrix

COLUMN_TOL = 1e-12


@dataclass
class FisherReport:
    p: float
    omega: np.ndarray
    n_total: float
    P0: np.ndarray
    xi: np.ndarray  # xi[0] is the evaporation outcome
    J: np.ndarray
    crlb: np.ndarray
    flags: list[str] = field(default_factory=list)

    @property
    def rcrlb(self) -> np.ndarray:
        return np.sqrt(np.clip(self.crlb, 0, None))

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n_total": self.n_total,
            "omega": self.omega.tolist(),
            "P0": self.P0.tolist(),
            "xi": self.xi.tolist(),
            "J": self.J.tolist(),
            "crlb": self.crlb.tolist(),
            "rcrlb": self.rcrlb.tolist(),
            "flags": list(self.flags),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def evaporation(P: TransitionMatrix) -> np.ndarray:
    """``P0[j]``: chance that a motif-``j`` CIS is disconnected or loses nodes."""
    col = P.P.sum(axis=0)
    if np.any(col > 1 + COLUMN_TOL):
        raise ArithmeticError(f"transition matrix column sums exceed 1: {col.max()!r}")
    return np.clip(1.0 - col, 0.0, 1.0)


def outcome_matrix(P: TransitionMatrix) -> np.ndarray:
    """``P`` with the evaporation row stacked on top, shape ``(T + 1, T)``."""
    return np.vstack([evaporation(P)[None, :], P.P])


def fisher_information(P: TransitionMatrix, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Per-CIS Fisher information ``J`` about ``omega``, plus outcome probabilities."""
    omega = np.asarray(omega, dtype=float)
    Q = outcome_matrix(P)
    xi = Q @ omega
    flags = []
    live = xi > 0
    dropped = np.flatnonzero(~live & (Q.sum(axis=1) > 0))
    if dropped.size:
        # impossible outcomes under omega carry no information in the limit
        flags.append("dropped_outcomes:" + ",".join(str(i) for i in dropped))
    Ql = Q[live]
    J = (Ql / xi[live][:, None]).T @ Ql
    return J, xi, flags


def fisher_and_crlb(P: TransitionMatrix, omega: np.ndarray, n_total: float) -> FisherReport:
    """Lower bound ``((J^-1)_ii - omega_i^2) / n_total`` on the MSE of each concentration estimate."""
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (P.size,):
        raise ValueError(f"expected {P.size} concentrations, got shape {omega.shape}")
    if np.any(omega < 0) or abs(omega.sum() - 1) > 1e-9:
        raise ValueError("omega must be a probability vector")
    if n_total <= 0:
        raise ValueError("n_total must be positive")
    J, xi, flags = fisher_information(P, omega)
    J = (J + J.T) / 2
    try:
        Jinv = cho_solve(cho_factor(J), np.eye(len(J)))
    except LinAlgError:
        Jinv = np.linalg.pinv(J, hermitian=True)
        flags.append("pseudo_inverse")
    crlb = (np.diag(Jinv) - omega**2) / n_total
    return FisherReport(
        p=P.p,
        omega=omega,
        n_total=n_total,
        P0=evaporation(P),
        xi=xi,
        J=J,
        crlb=crlb,
        flags=flags,
    )
