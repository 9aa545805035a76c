import numpy as np
import pytest
from hypothesis import given, strategies as st

from minfer.enumeration import CountVector, count_cis
from minfer.generators import erdos_renyi
from minfer.inference import (
    EmptySampleError, NumericError, build_P, clamp_and_renormalize, infer_concentrations,
    infer_counts, transition_matrix, ZeroNormalizerError,
)
from minfer.motifs import SUPPORTED, build_catalog, compute_phi
from minfer.sampling import SamplerConfig, sample_graph

U3 = build_catalog(3, "undirected")


def cv(*m, cat=U3):
    return CountVector(cat.k, cat.kind, np.array(m, dtype=np.int64))


@pytest.mark.parametrize("p", [0.1, 0.5, 0.9, 0.37])
def test_closed_form_3node(p):
    q = 1 - p
    P = transition_matrix(U3, p)
    np.testing.assert_allclose(P.P, [[p**2, 3 * q * p**2], [0, p**3]], rtol=0, atol=1e-12)
    inv = np.column_stack([P.solve(e) for e in np.eye(2)])
    np.testing.assert_allclose(inv, [[p**-2, -3 * q * p**-3], [0, p**-3]], rtol=1e-10)


def test_p_half_values():
    np.testing.assert_array_equal(transition_matrix(U3, 0.5).P, [[0.25, 0.375], [0, 0.125]])


@pytest.mark.parametrize("k, kind", sorted(SUPPORTED, key=str))
def test_identity_at_p_one(k, kind):
    cat = build_catalog(k, kind)
    np.testing.assert_array_equal(transition_matrix(cat, 1.0).P, np.eye(cat.size))


@pytest.mark.parametrize("k, kind", sorted(SUPPORTED, key=str))
@pytest.mark.parametrize("p", [0.05, 0.3, 0.8])
def test_P_structure(k, kind, p):
    cat = build_catalog(k, kind)
    P = transition_matrix(cat, p).P
    assert np.array_equal(P, np.triu(P))
    np.testing.assert_allclose(np.diag(P), p ** cat.edge_counts.astype(float))
    assert np.all(P.sum(axis=0) <= 1 + 1e-12)


def test_build_P_rejects_p():
    phi = compute_phi(U3)
    for p in (0, -1, 1.01):
        with pytest.raises(ValueError):
            build_P(phi, p, U3)


def test_underflow():
    cat = build_catalog(5, "undirected")
    with pytest.raises(NumericError):
        transition_matrix(cat, 1e-40)


def test_infer_identity():
    r = infer_counts(cv(5, 7), transition_matrix(U3, 1.0))
    np.testing.assert_array_equal(r.n_hat, [5, 7])
    np.testing.assert_allclose(r.omega_hat, [5 / 12, 7 / 12])


def test_infer_hand_solve():
    # n2 = 1 / 0.125 = 8 ; n1 = (10 - 0.375 * 8) / 0.25 = 28
    P = transition_matrix(U3, 0.5)
    r = infer_counts(cv(10, 1), P)
    np.testing.assert_allclose(r.n_hat, [28, 8])
    np.testing.assert_allclose(r.omega_hat, [7 / 9, 2 / 9])
    np.testing.assert_allclose(r.rho, [10 / 11, 1 / 11])
    assert r.W == pytest.approx(36 / 11)
    r = infer_counts(cv(3, 0), P)
    np.testing.assert_allclose(r.n_hat, [12, 0])
    np.testing.assert_allclose(r.omega_hat, [1, 0])


def test_negative_estimates_kept_and_flagged():
    r = infer_counts(cv(2, 1), transition_matrix(U3, 0.5))
    # n1 = (2 - 0.375 * 8) / 0.25 = -4
    np.testing.assert_allclose(r.n_hat, [-4, 8])
    np.testing.assert_allclose(r.omega_hat, [-1, 2])
    assert "negative_n_hat:1" in r.flags
    assert r.omega_hat.sum() == pytest.approx(1)


def test_zero_normalizer():
    with pytest.raises(NumericError):
        infer_counts(cv(1, 1), transition_matrix(U3, 0.5))


def test_zero_normalizer_with_rounding_residue():
    # at p = 0.05 the total is 400 m1 - 14800 m2, exactly zero for (74, 2),
    # but the triangular solve leaves a residue around 1e-11
    P = transition_matrix(U3, 0.05)
    assert P.solve([74.0, 2.0]).sum() != 0
    with pytest.raises(ZeroNormalizerError):
        infer_counts(cv(74, 2), P)
    assert infer_counts(cv(75, 2), P).W > 0


def test_empty_sample():
    with pytest.raises(EmptySampleError):
        infer_counts(cv(0, 0), transition_matrix(U3, 0.5))


def test_explicit_inverse_agrees():
    cat = build_catalog(4, "undirected")
    P = transition_matrix(cat, 0.3)
    m = cv(40, 30, 9, 2, 1, 1, cat=cat)
    a = infer_counts(m, P).n_hat
    b = infer_counts(m, P, explicit_inverse=True).n_hat
    np.testing.assert_allclose(a, b, rtol=1e-9)


def test_concentration_examples():
    np.testing.assert_allclose(infer_concentrations([1, 0], transition_matrix(U3, 1.0)), [1, 0])
    np.testing.assert_allclose(infer_concentrations([10 / 11, 1 / 11], transition_matrix(U3, 0.5)), [7 / 9, 2 / 9])
    with pytest.raises(ValueError):
        infer_concentrations([0.5, 0.6], transition_matrix(U3, 0.5))


@given(
    st.sampled_from(sorted(SUPPORTED, key=str)),
    st.floats(0.05, 1.0),
    st.lists(st.integers(0, 10**6), min_size=21, max_size=21),
)
def test_count_and_concentration_forms_agree(cat_key, p, raw):
    cat = build_catalog(*cat_key)
    m = np.array(raw[: cat.size], dtype=np.int64)
    if m.sum() == 0:
        m[0] = 1
    P = transition_matrix(cat, p)
    try:
        rep = infer_counts(CountVector(cat.k, cat.kind, m), P)
    except NumericError:
        return
    w = infer_concentrations(m / m.sum(), P)
    np.testing.assert_allclose(w, rep.omega_hat, rtol=1e-7, atol=1e-9 * np.abs(rep.omega_hat).max())
    assert rep.omega_hat.sum() == pytest.approx(1)


@pytest.mark.parametrize("k, kind", sorted(SUPPORTED, key=str))
def test_round_trip_at_p_one(k, kind):
    g = erdos_renyi(14, 0.4, kind, seed=k)
    n = count_cis(g, k)
    r = infer_counts(n, transition_matrix(build_catalog(k, kind), 1.0))
    np.testing.assert_array_equal(r.n_hat, n.counts)


def _mc(g, k, p, runs):
    cat = build_catalog(k, g.kind)
    P = transition_matrix(cat, p)
    ms, ns = [], []
    for seed in range(runs):
        m = count_cis(sample_graph(g, SamplerConfig(p=p, seed=seed)), k, cat)
        ms.append(m.counts)
        ns.append(P.solve(m.counts))
    return P, np.array(ms, float), np.array(ns)


@pytest.mark.parametrize("k, kind, p", [(4, "undirected", 0.5), (3, "directed", 0.6), (3, "signed", 0.4)])
def test_expectation_model_and_unbiasedness(k, kind, p):
    g = erdos_renyi(13, 0.45, kind, seed=11)
    n = count_cis(g, k).counts
    P, ms, ns = _mc(g, k, p, 1500)
    se_m = ms.std(axis=0, ddof=1) / np.sqrt(len(ms))
    assert np.all(np.abs(ms.mean(axis=0) - P.P @ n) <= 3 * se_m + 1e-12)
    se_n = ns.std(axis=0, ddof=1) / np.sqrt(len(ns))
    assert np.all(np.abs(ns.mean(axis=0) - n) <= 3 * se_n + 1e-9)


def test_clamp_is_presentation_only():
    w = np.array([1.2, -0.2])
    np.testing.assert_allclose(clamp_and_renormalize(w), [1, 0])
