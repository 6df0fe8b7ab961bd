import math

import numpy as np
import pytest

from sepdec.exceptions import BadS, EigensolverFailure, InconsistentTheta, NotPPT
from sepdec.services.ppt_structure import TWO_PI, wrap_angle

from .conftest import angle_gap

PPT_CASES = [(n, seed) for n in range(2, 9) for seed in range(6)]


def test_wrap_angle_range():
    assert wrap_angle(math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == pytest.approx(math.pi)
    assert wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    assert wrap_angle(0.0) == 0.0
    np.testing.assert_allclose(wrap_angle(np.array([-math.pi, 0.5])), [math.pi, 0.5])


def test_w2_structure_matrices(analyzer, w2):
    np.testing.assert_allclose(analyzer.assemble_A(w2, 1).A, [[0.45, 0.05], [0.05, 0.45]])
    np.testing.assert_allclose(analyzer.assemble_A(w2, 2).A, [[0.05, 0.45], [0.45, 0.05]])


def test_w2_fails_minors(analyzer, w2):
    report = analyzer.check_minor_relations(w2)
    assert not report.is_ppt
    assert report.worst_minor_value == pytest.approx(0.2, abs=1e-12)
    m, j, k, p, q = report.worst_witness
    assert m in (1, 2)
    assert (j, k, p, q) == (1, 1, 2, 2)
    assert min(report.per_m_min_eig) == pytest.approx(-0.4, abs=1e-12)


def test_uniform_passes_minors(analyzer, uniform2):
    report = analyzer.check_minor_relations(uniform2)
    assert report.is_ppt
    assert report.max_minor_residual <= 1e-12
    assert report.worst_witness is None
    np.testing.assert_allclose(analyzer.assemble_A(uniform2, 1).A, np.full((2, 2), 0.25))


def test_uniform_theta_vanishes(analyzer, generator):
    theta = analyzer.extract_theta(generator.gen_uniform(4))
    np.testing.assert_allclose(theta.theta, 0.0, atol=1e-15)
    assert theta.sum_defect_k == 0


def test_extract_theta_rejects_npt(analyzer, w2):
    with pytest.raises(NotPPT) as info:
        analyzer.extract_theta(w2)
    assert info.value.exit_code == 1


@pytest.mark.parametrize("n,seed", PPT_CASES)
def test_constructed_instances_are_structurally_ppt(analyzer, generator, n, seed):
    params = generator.gen_ppt(n, seed)
    report = analyzer.check_minor_relations(params)
    assert report.is_ppt
    assert report.max_minor_residual <= 1e-9
    assert min(report.per_m_min_eig) >= -1e-10


@pytest.mark.parametrize("n,seed", PPT_CASES)
def test_theta_sums_to_multiple_of_two_pi(analyzer, generator, n, seed):
    theta = analyzer.extract_theta(generator.gen_ppt(n, seed))
    assert abs(sum(theta.theta) - TWO_PI * theta.sum_defect_k) <= 1e-9
    assert theta.consistency_residual <= 1e-9
    assert abs(theta.sum_defect_k) <= n // 2 + 1


@pytest.mark.parametrize("n,seed", [(n, seed) for n in range(4, 10) for seed in range(3)])
def test_second_order_theta_matches_formula(analyzer, generator, n, seed):
    theta = analyzer.extract_theta(generator.gen_ppt(n, seed))
    values = theta.theta
    expected = 2 * values[0] + values[1] + values[n - 1]
    assert angle_gap(analyzer.derive_theta_s(theta, 2, 1), expected) <= 1e-12


@pytest.mark.parametrize("n,seed", [(n, seed) for n in range(2, 10) for seed in range(3)])
def test_derived_theta_matches_direct_extraction(analyzer, generator, n, seed):
    params = generator.gen_ppt(n, seed)
    theta = analyzer.extract_theta(params)
    for s in range(1, n // 2 + 1):
        for m in range(1, n + 1):
            derived = analyzer.derive_theta_s(theta, s, m)
            for j in range(1, n + 1):
                assert angle_gap(derived, analyzer.extract_theta_direct(params, s, m, j)) <= 1e-9


@pytest.mark.parametrize("n", [4, 5, 8])
def test_higher_order_theta_sums_vanish(analyzer, generator, n):
    theta = analyzer.extract_theta(generator.gen_ppt(n, 1))
    for s in range(1, n // 2 + 1):
        total = sum(analyzer.derive_theta_s(theta, s, m) for m in range(1, n + 1))
        assert angle_gap(total, 0.0) <= 1e-9


@pytest.mark.parametrize("s", [0, 3, -1])
def test_derive_theta_s_rejects_out_of_range(analyzer, generator, s):
    theta = analyzer.extract_theta(generator.gen_ppt(5, 0))
    with pytest.raises(BadS):
        analyzer.derive_theta_s(theta, s, 1)


@pytest.mark.parametrize("n,seed", [(n, seed) for n in (2, 3, 4, 6) for seed in range(4)])
def test_partial_transpose_spectrum_is_union_of_blocks(analyzer, generator, n, seed):
    assert analyzer.verify_block_decomposition(generator.gen_random(n, seed))
    assert analyzer.verify_block_decomposition(generator.gen_ppt(n, seed))


def test_w2_block_spectrum(analyzer, w2):
    assert analyzer.verify_block_decomposition(w2)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_product_identity_holds_for_any_instance(analyzer, generator, n):
    assert analyzer.product_identity_residual(generator.gen_random(n, 2)) <= 1e-10


@pytest.mark.parametrize("n,seed", [(3, 0), (5, 1), (8, 2)])
def test_ppt_blocks_are_rank_one(analyzer, generator, n, seed):
    params = generator.gen_ppt(n, seed)
    assert max(analyzer.rank_one_residual(params)) <= 1e-9
    identities = analyzer.check_cycle_identities(params)
    assert identities.order3_residual <= 1e-9
    assert identities.order4_residual <= 1e-9


def test_random_instance_breaks_cycle_identities(analyzer, generator):
    params = generator.gen_random(4, 0)
    assert not analyzer.check_minor_relations(params).is_ppt
    assert max(analyzer.rank_one_residual(params)) > 1e-6


@pytest.mark.parametrize("n,seed", [(n, seed) for n in range(2, 7) for seed in range(10)])
def test_structural_verdict_matches_spectral(analyzer, builder, generator, n, seed):
    for params in (generator.gen_ppt(n, seed), generator.gen_random(n, seed)):
        structural = analyzer.check_minor_relations(params)
        spectral = builder.spectral_ppt(params)
        if 1e-11 < -spectral.min_eigenvalue < 1e-7:
            continue
        assert structural.is_ppt == spectral.is_ppt


@pytest.mark.parametrize("n", range(2, 9))
def test_spectrum_union_over_random_instances(analyzer, generator, n):
    for seed in range(200):
        assert analyzer.verify_block_decomposition(generator.gen_random(n, seed))


def test_theta_lies_in_principal_range(analyzer, generator):
    for n in range(2, 9):
        for seed in range(20):
            params = generator.gen_ppt(n, seed)
            theta = analyzer.extract_theta(params)
            assert all(-math.pi < value <= math.pi for value in theta.theta)
            for m in range(1, n + 1):
                assert -math.pi < analyzer.extract_theta_direct(params, 1, m) <= math.pi


def test_minor_relations_with_base_dependent_theta(analyzer, generator):
    params = generator.gen_random(4, 0)
    forced = analyzer.check_minor_relations(params).model_copy(update={"is_ppt": True})
    with pytest.raises(InconsistentTheta) as info:
        analyzer.extract_theta(params, forced)
    assert info.value.exit_code == 3
    assert info.value.detail["consistency_residual"] > 1e-6


def test_eigensolver_failure_in_minor_check(analyzer, generator, monkeypatch):
    def diverge(*args, **kwargs):
        raise np.linalg.LinAlgError("Eigenvalues did not converge")

    params = generator.gen_ppt(3, 0)
    monkeypatch.setattr(np.linalg, "eigvalsh", diverge)
    with pytest.raises(EigensolverFailure):
        analyzer.check_minor_relations(params)
    with pytest.raises(EigensolverFailure):
        analyzer.verify_block_decomposition(params)
