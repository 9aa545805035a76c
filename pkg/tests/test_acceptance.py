"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed together in the
pytest terminal summary. ``python tests/test_acceptance.py`` runs just this file.
"""

import math
import os
import sys
import time

import numpy as np
import pytest

from minfer.enumeration import brute_force_enumerate, count_cis
from minfer.evaluation import EvalConfig, evaluate
from minfer.generators import erdos_renyi, preferential_attachment
from minfer.graph import Graph, GraphKind, iter_edge_lines
from minfer.inference import transition_matrix
from minfer.bounds import fisher_and_crlb
from minfer.motifs import SUPPORTED, build_catalog, compute_phi, phi_by_edge_subsets
from minfer.sampling import SamplerConfig, sample_graph, sample_stream, tau

GRQC_ENV = "MINFER_CA_GRQC"


RESULTS: dict[int, str] = {}  # printed in the terminal summary by conftest


def report(n, ok, detail, status=None):
    line = f"criterion {n}: {status or ('PASS' if ok else 'FAIL')}  {detail}"
    RESULTS[n] = line
    print(line)
    return ok


@pytest.fixture(scope="module")
def acceptance_graph():
    g = preferential_attachment(405, 5, seed=1)
    assert g.n_edges == 2000
    return g


def _random_graphs():
    rng = np.random.default_rng(20240601)
    families = [("er", 0.1), ("er", 0.3), ("er", 0.6), ("pa", None)]
    for kind in GraphKind:
        for fam, dens in families:
            for _ in range(25):
                n = int(rng.integers(6, 31))
                seed = int(rng.integers(2**31))
                if fam == "er":
                    yield erdos_renyi(n, dens, kind, seed=seed)
                else:
                    yield preferential_attachment(n, int(rng.integers(1, 4)), kind, seed=seed)


def test_c1_enumeration_exact():
    t0 = time.perf_counter()
    graphs = mismatches = checks = 0
    for g in _random_graphs():
        graphs += 1
        for k in (3, 4, 5):
            if (k, g.kind) not in SUPPORTED:
                continue
            checks += 1
            if count_cis(g, k) != brute_force_enumerate(g, k):
                mismatches += 1
    dt = time.perf_counter() - t0
    ok = graphs == 300 and mismatches == 0 and dt < 120
    report(1, ok, f"{graphs} graphs, {checks} (graph, k) checks, {mismatches} mismatches, {dt:.1f}s (limit 120s)")
    assert ok


def test_c2_phi_oracle():
    t0 = time.perf_counter()
    bad = []
    for k, kind in sorted(SUPPORTED, key=str):
        cat = build_catalog(k, kind)
        if not np.array_equal(compute_phi(cat), phi_by_edge_subsets(cat)):
            bad.append((k, kind.value))
    phi12 = int(compute_phi(build_catalog(3, "undirected"))[0, 1])
    dt = time.perf_counter() - t0
    ok = not bad and phi12 == 3 and dt < 60
    report(2, ok, f"{len(SUPPORTED)} catalogs, mismatched={bad}, phi_12(3, undirected)={phi12}, {dt:.1f}s (limit 60s)")
    assert ok


def test_c3_closed_form_P():
    cat = build_catalog(3, "undirected")
    err_p = err_inv = 0.0
    for p in (0.1, 0.5, 0.9):
        q = 1 - p
        P = transition_matrix(cat, p)
        err_p = max(err_p, np.abs(P.P - [[p**2, 3 * q * p**2], [0, p**3]]).max())
        inv = np.column_stack([P.solve(e) for e in np.eye(2)])
        want = [[p**-2, -3 * q * p**-3], [0, p**-3]]
        err_inv = max(err_inv, np.abs(inv - want).max())
    ok = err_p <= 1e-12 and err_inv <= 1e-10
    report(3, ok, f"max |P - closed form| = {err_p:.2e} (tol 1e-12), max |P^-1 - closed form| = {err_inv:.2e} (tol 1e-10)")
    assert ok


def test_c4_unbiased(acceptance_graph):
    t0 = time.perf_counter()
    truth = count_cis(acceptance_graph, 3)
    rep = evaluate(acceptance_graph, EvalConfig(k=3, p=0.2, runs=1000, seed=0), truth)
    z = (np.array(rep.n_hat_mean) - truth.counts) / np.array(rep.n_hat_se)
    dt = time.perf_counter() - t0
    ok = bool(np.all(np.abs(z) <= 3)) and dt < 300
    report(4, ok, f"n={truth.counts.tolist()}, mean n_hat={np.round(rep.n_hat_mean, 1).tolist()}, "
                  f"z={np.round(z, 2).tolist()} (|z| <= 3), {dt:.1f}s")
    assert ok


def test_c5_nrmse_trend(acceptance_graph):
    truth = count_cis(acceptance_graph, 3)
    lo = evaluate(acceptance_graph, EvalConfig(k=3, p=0.01, runs=1000, seed=0), truth)
    hi = evaluate(acceptance_graph, EvalConfig(k=3, p=0.05, runs=1000, seed=0), truth)
    ratio = lo.nrmse[0] / hi.nrmse[0]
    ok = 5 <= ratio <= 20
    report(5, ok, f"wedge NRMSE p=0.01: {lo.nrmse[0]:.4g} ({lo.empty_runs} empty, {lo.undefined_runs} undefined runs), "
                  f"p=0.05: {hi.nrmse[0]:.4g} ({hi.undefined_runs} undefined), ratio {ratio:.3g} (want [5, 20])")
    assert ok


def test_c6_crlb(acceptance_graph):
    truth = count_cis(acceptance_graph, 3)
    omega = truth.concentrations()
    floor = fisher_and_crlb(transition_matrix(build_catalog(3, "undirected"), 1.0), omega, truth.total)
    floor_err = np.abs(floor.crlb - omega * (1 - omega) / truth.total).max()
    ok = floor_err <= 1e-12
    parts = [f"p=1 floor err {floor_err:.1e}"]
    for p in (0.2, 0.5):
        rep = evaluate(acceptance_graph, EvalConfig(k=3, p=p, runs=1000, seed=1), truth)
        mse, se, crlb = np.array(rep.mse), np.array(rep.mse_se), np.square(rep.rcrlb)
        good = bool(np.all(mse >= crlb - 3 * se))
        ok &= good
        parts.append(f"p={p}: rmse={np.sqrt(mse).round(6).tolist()} rcrlb={np.round(rep.rcrlb, 6).tolist()}")
    report(6, ok, "; ".join(parts))
    assert ok


def _load_snap(path):
    # collaboration lists carry both arc directions and a few self-loops
    with open(path, encoding="utf-8") as fh:
        edges = {(min(u, v), max(u, v)) for u, v, _, _ in iter_edge_lines(
            (line for line in fh if not _self_loop(line)), GraphKind.UNDIRECTED)}
    return Graph.from_edges("undirected", edges)


def _self_loop(line):
    parts = line.split()
    return len(parts) >= 2 and not line.lstrip().startswith("#") and parts[0] == parts[1]


def test_c7_real_data():
    path = os.environ.get(GRQC_ENV)
    if not path or not os.path.exists(path):
        report(7, True, f"set {GRQC_ENV} to a local ca-GrQc edge list to run", status="SKIP")
        pytest.skip("ca-GrQc not available")
    t0 = time.perf_counter()
    g = _load_snap(path)
    cv = count_cis(g, 5)
    om = cv.concentrations()
    dt = time.perf_counter() - t0
    total_ok = round(cv.total / 1e7, 2) == 3.64
    w1_ok = abs(om[0] - 9.8e-2) <= 1e-3
    # only the line and circle have pinned ids; other values are matched as a multiset
    w3_ok = any(abs(x - 2.1e-1) <= 1e-2 for x in om)
    ok = total_ok and w1_ok and w3_ok and dt <= 1800
    report(7, ok, f"{g.n_nodes} nodes, {g.n_edges} edges, total={cv.total:.4g}, omega_1={om[0]:.3g}, "
                  f"omega_6={om[5]:.3g}, {dt:.0f}s")
    assert ok


def test_c8_stream_equivalence():
    rng = np.random.default_rng(8)
    mismatches = 0
    for i in range(50):
        kind = list(GraphKind)[i % 3]
        g = erdos_renyi(int(rng.integers(10, 60)), 0.2, kind, seed=i)
        cfg = SamplerConfig.hashed(float(rng.uniform(0.1, 0.9)), max(g.nodes) + 1, seed=i)
        stream = []
        for u, v, lab in g.edges():
            if kind is GraphKind.DIRECTED and lab == 3:
                stream += [(u, v, 1), (v, u, 1)]  # both arcs arrive separately
            else:
                stream.append((u, v, lab))
        order = rng.permutation(len(stream))
        if sample_stream([stream[j] for j in order], cfg, kind) != sample_graph(g, cfg):
            mismatches += 1
    g = preferential_attachment(300, 2, "directed", seed=3, p_bidir=0.5)
    g = Graph.from_edges("directed", list(g.edges())[:500])
    split = 0
    for seed in range(20):
        cfg = SamplerConfig.hashed(0.5, max(g.nodes) + 1, seed=seed)
        thr = cfg.threshold
        for u, v, lab in g.edges():
            if lab != 3:
                continue
            a = sample_stream([(u, v, 1)], cfg, "directed").n_edges
            b = sample_stream([(v, u, 1)], cfg, "directed").n_edges
            split += a != b or (tau(u, v, cfg) < thr) != (tau(v, u, cfg) < thr)
    n_bidir = sum(lab == 3 for _, _, lab in g.edges())
    ok = mismatches == 0 and split == 0
    report(8, ok, f"50 graphs, {mismatches} stream mismatches; {n_bidir} reciprocal pairs x 20 seeds, {split} split")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
