import numpy as np
import pytest

from conftest import random_orthonormal_instance, random_unit_rows
from oracles import curvatures_bruteforce, proj_norm
from projsel import matroid as mt
from projsel.curvature import (backward_curvature, coherence_relaxation, count_triples,
                               curvature_report, forward_curvature, omp_curvature,
                               principal_angle, principal_cos, angle_curvature_bound, triple_ratio)
from projsel.selectors import Instance

TH = np.pi / 3
TWO = np.array([[1.0, 0.0], [np.cos(TH), np.sin(TH)]])


def two_vector(eta=(0.0, 1.0), K=1):
    return Instance(TWO, np.array(eta), mt.Uniform(K, 2))


def near_orthogonal(rng, n, dim, scale):
    Q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    X = Q.T[:n] + scale * rng.normal(size=(n, dim))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def test_counterexample_values(fr_example):
    rep = curvature_report(fr_example, 2)
    # frozen from the brute-force oracle; hand check: E={s2}, s=s1, t=s3 gives (4/3)/(2/3)
    assert rep.kappa_fwd == pytest.approx(2.0, abs=1e-12)
    assert rep.kappa_bwd == pytest.approx(2.0, abs=1e-12)
    assert rep.kappa_omp == pytest.approx(2.0, abs=1e-12)
    assert rep.phi == pytest.approx(np.pi / 4, abs=1e-12)
    assert rep.phi <= np.pi / 3


def test_two_vector_forward_curvature():
    # only (s, t) = (x1, x2) satisfies the ordering: ratio (1 - 0) / (3/4)
    assert forward_curvature(two_vector(), 1) == pytest.approx(4 / 3, abs=1e-12)
    assert backward_curvature(two_vector(), 1) == pytest.approx(1 / 3, abs=1e-12)


def test_single_admissible_omp_triple():
    # E = {} only; |<eta, x2>| > |<eta, x1>| = 0 admits just s = x2, t = x1
    inst = two_vector()
    gain_s = np.sin(TH) ** 2
    gain_t_after_s = 1.0 - gain_s
    assert omp_curvature(inst, 1) == pytest.approx(gain_t_after_s / gain_s, abs=1e-12)


def test_single_element_ground_is_vacuous():
    inst = Instance(np.array([[1.0, 0.0]]), np.array([1.0, 0.0]), mt.Uniform(1, 1))
    rep = curvature_report(inst, 1)
    assert rep.kappa_fwd == rep.kappa_bwd == rep.kappa_omp == 0
    assert all(rep.vacuous.values())


def test_eta_orthogonal_to_everything_skips_all():
    inst = Instance(np.eye(4)[:3], np.array([0, 0, 0, 1.0]), mt.Uniform(2, 3))
    rep = curvature_report(inst, 2)
    assert rep.kappa_bwd == 0 and rep.vacuous["bwd"]
    assert rep.skipped_pairs["bwd"] > 0


@pytest.mark.parametrize("K, expected", [(1, np.pi / 2), (2, TH), (3, TH)])
def test_two_vector_principal_angle(K, expected):
    assert principal_angle(two_vector(K=min(K, 2)), K) == pytest.approx(expected)


@pytest.mark.parametrize("seed", range(12))
def test_matches_bruteforce_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 7))
    dim = int(rng.integers(3, 6))
    K = int(rng.integers(1, 3))
    X = random_unit_rows(rng, n, dim) if seed % 2 else near_orthogonal(rng, min(n, dim), dim, 0.2)
    inst = Instance(X, rng.normal(size=dim), mt.Uniform(K, len(X)))
    rep = curvature_report(inst, K)
    ref = curvatures_bruteforce(inst.ground, inst.eta, K)
    assert rep.kappa_fwd == pytest.approx(ref["fwd"], rel=1e-7, abs=1e-9)
    assert rep.kappa_bwd == pytest.approx(ref["bwd"], rel=1e-7, abs=1e-9)
    assert rep.kappa_omp == pytest.approx(ref["omp"], rel=1e-7, abs=1e-9)
    assert rep.phi == pytest.approx(ref["phi"], abs=1e-9)
    assert np.cos(rep.phi) == pytest.approx(principal_cos(inst.ground, K), abs=1e-12)


@pytest.mark.parametrize("seed", range(12))
def test_witnesses_reproduce_values(seed):
    rng = np.random.default_rng(50 + seed)
    inst = Instance(random_unit_rows(rng, 6, 4), rng.normal(size=4), mt.Uniform(2, 6))
    rep = curvature_report(inst, 2)
    for kind, value in (("fwd", rep.kappa_fwd), ("bwd", rep.kappa_bwd), ("omp", rep.kappa_omp)):
        E, s, t = rep.witnesses[kind]
        assert triple_ratio(inst, kind, E, s, t) == pytest.approx(value, rel=1e-9, abs=1e-9)
    E, s = rep.witnesses["phi"]
    assert np.arccos(min(1, proj_norm(inst.ground[s], list(inst.ground[list(E)])))) == \
        pytest.approx(rep.phi, abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_orthonormal_ground(seed):
    rng = np.random.default_rng(seed)
    inst = random_orthonormal_instance(rng, 6, 6, mt.Uniform(3, 6))
    rep = curvature_report(inst, 3)
    assert rep.kappa_fwd == pytest.approx(1.0, abs=1e-9)
    assert rep.phi == pytest.approx(np.pi / 2, abs=1e-9)
    # the backward and OMP ratios reduce to <eta,t>^2 / <eta,s>^2 with |<eta,s>| >= |<eta,t>|
    p = np.sort((inst.ground @ inst.eta) ** 2)[::-1]
    consecutive = np.max(p[1:] / p[:-1])
    assert rep.kappa_bwd == pytest.approx(consecutive, rel=1e-9)
    assert rep.kappa_omp == pytest.approx(consecutive, rel=1e-9)
    assert max(rep.kappa_fwd, rep.kappa_bwd, rep.kappa_omp) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_sampled_is_a_monotone_lower_estimate(seed):
    rng = np.random.default_rng(seed)
    inst = Instance(random_unit_rows(rng, 7, 5), rng.normal(size=5), mt.Uniform(2, 7))
    exact = curvature_report(inst, 2)
    prev = None
    for budget in (20, 100, 400, 2000):
        s = curvature_report(inst, 2, "sampled", n_samples=budget, seed=seed)
        assert s.kappa_fwd <= exact.kappa_fwd + 1e-12
        assert s.kappa_bwd <= exact.kappa_bwd + 1e-12
        assert s.kappa_omp <= exact.kappa_omp + 1e-12
        assert s.phi >= exact.phi - 1e-12
        if prev is not None:
            assert s.kappa_fwd >= prev.kappa_fwd and s.kappa_bwd >= prev.kappa_bwd
            assert s.phi <= prev.phi
        prev = s


def test_exact_guard():
    inst = Instance(np.eye(13), np.ones(13), mt.Uniform(2, 13))
    with pytest.raises(mt.GuardError, match="sampled"):
        curvature_report(inst, 2)
    rep = curvature_report(inst, 2, "sampled", n_samples=500)
    assert rep.mode == "sampled" and rep.triples >= 500


def test_count_triples():
    assert count_triples(8, 3) == sum(
        __import__("math").comb(8, e) * (8 - e) * (7 - e) for e in range(5))


@pytest.mark.parametrize("seed", range(30))
def test_angle_bounds_hold(seed):
    rng = np.random.default_rng(seed)
    K = 2 + seed % 2
    inst = Instance(near_orthogonal(rng, 6, 6, 0.05 + 0.01 * (seed % 5)), rng.normal(size=6),
                    mt.Uniform(K, 6))
    rep = curvature_report(inst, K)
    t2 = angle_curvature_bound(rep.phi)
    if t2 is not None:
        assert max(rep.kappa_fwd, rep.kappa_bwd) <= t2 + 1e-9
    pw = rep.pairwise_bound()
    assert pw is not None and rep.max_abs_perp_cos <= pw + 1e-9
    ob = rep.omp_angle_bound()
    assert ob is not None and rep.kappa_omp <= ob + 1e-9


def test_angle_curvature_bound_examples():
    assert angle_curvature_bound(np.pi / 2) == pytest.approx(1.0)
    assert angle_curvature_bound(np.pi / 3) is None
    assert angle_curvature_bound(np.arccos(0.1)) == pytest.approx(1.25)


def test_coherence_examples(fr_example):
    st = coherence_relaxation(Instance(np.eye(4), np.ones(4), mt.Uniform(3, 4)), 3)
    assert st.mu == 0 and st.cos_phi_upper == 0
    st = coherence_relaxation(fr_example, 2)
    assert st.mu == pytest.approx(0.5)
    assert st.m == 2
    assert st.lambda_min_bound == pytest.approx(0.5)
    assert st.cos_phi_upper == pytest.approx(1.0)
    assert st.cos_phi_upper >= np.cos(principal_angle(fr_example, 2))


@pytest.mark.parametrize("seed", range(10))
def test_coherence_bounds_exact_angle(seed):
    rng = np.random.default_rng(seed)
    inst = Instance(near_orthogonal(rng, 6, 6, 0.03), rng.normal(size=6), mt.Uniform(2, 6))
    st = coherence_relaxation(inst, 2)
    assert 0 <= st.mu <= 1
    if st.applicable:
        assert st.cos_phi_upper >= np.cos(principal_angle(inst, 2)) - 1e-12


def test_report_json(fr_example):
    js = curvature_report(fr_example, 2).to_json()
    assert set(js) >= {"kappa_fwd", "kappa_bwd", "kappa_omp", "phi", "mode", "skipped", "witnesses"}
    assert js["witnesses"]["fwd"] == {"E": [1], "s": 0, "t": 2}
