"""Monte-Carlo accuracy harness: repeated sampling, estimation and NRMSE.

Run ``r`` of an evaluation draws its sampler seed from ``(seed, r)`` alone, so
results do not depend on how runs are scheduled across worker processes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import fisher_and_crlb
from .enumeration import CountVector, count_cis
from .graph import Graph
from .inference import EmptySampleError, ZeroNormalizerError, infer_counts, transition_matrix
from .motifs import build_catalog
from .sampling import DEFAULT_RHO, SamplerConfig, sample_graph


@dataclass
class EvalConfig:
    k: int = 3
    p: float = 0.1
    runs: int = 1000
    mode: str = "bernoulli"
    seed: int = 0
    rho: int = DEFAULT_RHO
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if not 0 < self.p <= 1:
            raise ValueError(f"p must be in (0, 1], got {self.p}")


def run_seed(seed: int, run: int) -> int:
    return int(np.random.SeedSequence([seed, run]).generate_state(1, np.uint64)[0])


def sampler_for_run(g: Graph, cfg: EvalConfig, run: int) -> SamplerConfig:
    s = run_seed(cfg.seed, run)
    if cfg.mode == "hash":
        delta = max(g.nodes, default=0) + 1
        return SamplerConfig.hashed(cfg.p, delta, seed=s, rho=cfg.rho)
    return SamplerConfig(p=cfg.p, mode="bernoulli", seed=s)


@dataclass
class RunResult:
    run: int
    m: np.ndarray
    n_hat: np.ndarray  # zeros when the sample held no CIS
    omega_hat: np.ndarray | None  # None when the sample was empty or the estimated total is zero


def single_run(g: Graph, cfg: EvalConfig, run: int) -> RunResult:
    scfg = sampler_for_run(g, cfg, run)
    gs = sample_graph(g, scfg)
    cat = build_catalog(cfg.k, g.kind)
    m = count_cis(gs, cfg.k, cat)
    P = transition_matrix(cat, scfg.effective_p)
    try:
        rep = infer_counts(m, P)
    except EmptySampleError:
        return RunResult(run, m.counts, np.zeros(cat.size), None)
    except ZeroNormalizerError:
        return RunResult(run, m.counts, P.solve(m.counts), None)
    return RunResult(run, m.counts, rep.n_hat, rep.omega_hat)


def _run_block(args):
    g, cfg, runs = args
    return [single_run(g, cfg, r) for r in runs]


def run_many(g: Graph, cfg: EvalConfig) -> list[RunResult]:
    runs = list(range(cfg.runs))
    if cfg.workers <= 1:
        return [single_run(g, cfg, r) for r in runs]
    blocks = [runs[i :: cfg.workers] for i in range(cfg.workers)]
    with ProcessPoolExecutor(cfg.workers) as pool:
        results = [res for block in pool.map(_run_block, [(g, cfg, b) for b in blocks]) for res in block]
    return sorted(results, key=lambda r: r.run)


def nrmse_stats(estimates: np.ndarray, truth: np.ndarray) -> dict:
    """Per-column mean, MSE and NRMSE of ``estimates`` (runs x motifs).

    NRMSE is ``sqrt(MSE) / truth`` and None where the truth is zero.
    """
    est = np.atleast_2d(np.asarray(estimates, dtype=float))
    truth = np.asarray(truth, dtype=float)
    err = est - truth
    mse = np.mean(err**2, axis=0)
    # standard error of the MSE itself, for bound comparisons
    mse_se = np.std(err**2, axis=0, ddof=1) / math.sqrt(len(est)) if len(est) > 1 else np.full(len(truth), np.nan)
    nrmse = [float(math.sqrt(v) / t) if t > 0 else None for v, t in zip(mse, truth)]
    return {"mean": est.mean(axis=0), "mse": mse, "mse_se": mse_se, "nrmse": nrmse}


@dataclass
class NrmseReport:
    k: int
    kind: str
    p: float
    effective_p: float
    runs: int
    empty_runs: int
    undefined_runs: int
    names: list[str]
    n_true: list[int]
    omega_true: list[float]
    omega_mean: list[float]
    mse: list[float]
    mse_se: list[float]
    nrmse: list[float | None]
    rcrlb: list[float]
    n_hat_mean: list[float]
    n_hat_se: list[float]
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def to_tsv(self) -> str:
        cols = ["id", "name", "n_true", "omega_true", "omega_mean", "mse", "nrmse", "rcrlb", "rmse"]
        rows = ["\t".join(cols)]
        for i, name in enumerate(self.names):
            nr = self.nrmse[i]
            rows.append("\t".join([
                str(i + 1), name, str(self.n_true[i]), repr(self.omega_true[i]), repr(self.omega_mean[i]),
                repr(self.mse[i]), "NA" if nr is None else repr(nr), repr(self.rcrlb[i]),
                repr(math.sqrt(self.mse[i])),
            ]))
        return "\n".join(rows) + "\n"


def evaluate(g: Graph, cfg: EvalConfig, truth: CountVector | None = None) -> NrmseReport:
    """Sample ``g`` ``cfg.runs`` times and score the concentration estimates.

    Runs whose sample has no ``k``-node CIS give no estimate; they are counted
    in ``empty_runs``. Runs whose estimated total is zero are counted in
    ``undefined_runs``. Both kinds are left out of the concentration statistics.
    The count statistics use every run, since ``n_hat = 0`` for an empty
    sample is what keeps the count estimator unbiased.
    """
    cat = build_catalog(cfg.k, g.kind)
    if truth is None:
        truth = count_cis(g, cfg.k, cat)
    if truth.total == 0:
        raise EmptySampleError(f"the input graph has no {cfg.k}-node CIS")
    omega = truth.concentrations()
    results = run_many(g, cfg)
    nonempty = [r for r in results if r.m.sum() > 0]
    good = [r for r in nonempty if r.omega_hat is not None]
    n_empty, n_undef = len(results) - len(nonempty), len(nonempty) - len(good)
    flags = []
    if not good:
        raise EmptySampleError("no run gave a concentration estimate; increase p")
    if n_empty:
        flags.append(f"empty_runs:{n_empty}")
    if n_undef:
        flags.append(f"undefined_runs:{n_undef}")
    om = np.array([r.omega_hat for r in good])
    nh = np.array([r.n_hat for r in results])
    st = nrmse_stats(om, omega)
    p_eff = sampler_for_run(g, cfg, 0).effective_p
    bound = fisher_and_crlb(transition_matrix(cat, p_eff), omega, truth.total)
    flags += bound.flags
    n_se = nh.std(axis=0, ddof=1) / math.sqrt(len(nh)) if len(nh) > 1 else np.full(cat.size, np.nan)
    return NrmseReport(
        k=cfg.k,
        kind=g.kind.value,
        p=cfg.p,
        effective_p=p_eff,
        runs=cfg.runs,
        empty_runs=n_empty,
        undefined_runs=n_undef,
        names=list(cat.names),
        n_true=[int(x) for x in truth.counts],
        omega_true=omega.tolist(),
        omega_mean=st["mean"].tolist(),
        mse=st["mse"].tolist(),
        mse_se=st["mse_se"].tolist(),
        nrmse=st["nrmse"],
        rcrlb=bound.rcrlb.tolist(),
        n_hat_mean=nh.mean(axis=0).tolist(),
        n_hat_se=n_se.tolist(),
        flags=flags,
    )
