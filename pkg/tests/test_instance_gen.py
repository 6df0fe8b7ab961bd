import math

import numpy as np
import pytest

from sepdec.exceptions import BadGenSpec
from sepdec.models.schemas import GenSpec, InstanceDocument
from sepdec.services.file_service import file_service
from sepdec.services.instance_gen import MAX_MAGNITUDE, MIN_MAGNITUDE, ppt_table


@pytest.mark.parametrize("kind", ["uniform", "ppt", "perturbed", "random"])
def test_generation_is_deterministic(generator, kind):
    spec = GenSpec(n=5, kind=kind, seed=42, epsilon=0.3 if kind == "perturbed" else None)
    first, second = (
        file_service.render(InstanceDocument.from_params(generator.generate(spec)))
        for _ in range(2)
    )
    assert first == second


def test_distinct_seeds_give_distinct_tables(generator):
    assert not np.allclose(generator.gen_ppt(4, 0).x, generator.gen_ppt(4, 1).x)
    assert not np.allclose(generator.gen_random(4, 0).x, generator.gen_random(4, 1).x)


@pytest.mark.parametrize("n", [2, 3, 9])
def test_generated_tables_are_valid(generator, n):
    for params in (generator.gen_ppt(n, 7), generator.gen_random(n, 7)):
        assert params.x.shape == (n, n)
        assert float(np.sum(np.abs(params.x) ** 2)) == pytest.approx(1.0, abs=1e-12)
        assert np.min(np.abs(params.x)) > 1e-12


def test_uniform_table(generator):
    np.testing.assert_allclose(generator.gen_uniform(3).x, np.full((3, 3), 1 / 3))


def test_ppt_table_with_flat_factors_is_uniform():
    ones = np.ones(3, dtype=complex)
    np.testing.assert_allclose(ppt_table(ones, ones, np.zeros(3)), np.full((3, 3), 1 / 3))


def test_ppt_table_layout():
    phi = np.array([1.0, 2.0])
    psi = np.array([3.0, 5.0])
    delta = np.array([0.0, math.pi / 2])
    table = ppt_table(phi, psi, delta) * math.sqrt(1 + 4) * math.sqrt(9 + 25)
    # x_l^j proportional to e^{-i delta_l} phi_j psi_{j+l-1}
    np.testing.assert_allclose(table, [[3, 10], [-5j, -6j]], atol=1e-12)
    assert MIN_MAGNITUDE < MAX_MAGNITUDE


def test_zero_epsilon_returns_base(generator):
    base = generator.gen_ppt(4, 9)
    np.testing.assert_array_equal(generator.gen_perturbed(4, 9, 0.0).x, base.x)


@pytest.mark.parametrize("n,seed", [(n, seed) for n in (3, 4, 6) for seed in range(5)])
def test_phase_flip_breaks_ppt(generator, analyzer, builder, n, seed):
    params = generator.gen_perturbed(n, seed, math.pi, kick="phase")
    structural = analyzer.check_minor_relations(params)
    assert not structural.is_ppt
    spectral = builder.spectral_ppt(params)
    if not 1e-11 < -spectral.min_eigenvalue < 1e-7:
        assert not spectral.is_ppt


@pytest.mark.parametrize("kick", ["phase", "magnitude"])
def test_tiny_perturbation_stays_ppt(generator, analyzer, kick):
    params = generator.gen_perturbed(5, 3, 1e-12, kick=kick)
    assert analyzer.check_minor_relations(params).is_ppt


def test_magnitude_kick_breaks_ppt(generator, analyzer):
    params = generator.gen_perturbed(4, 2, 0.5, kick="magnitude")
    assert not analyzer.check_minor_relations(params).is_ppt


def test_w2_instance(generator):
    params = generator.gen_w2()
    assert params.label == "W(2)"
    np.testing.assert_allclose(params.lam, [0.9, 0.1], atol=1e-12)


def test_perturbed_without_epsilon(generator):
    with pytest.raises(BadGenSpec):
        generator.generate(GenSpec(n=3, kind="perturbed", seed=0))


def test_negative_epsilon(generator):
    with pytest.raises(BadGenSpec):
        generator.gen_perturbed(3, 0, -0.1)


def test_gen_spec_bounds():
    with pytest.raises(ValueError):
        GenSpec(n=1, kind="ppt")
    with pytest.raises(ValueError):
        GenSpec(n=3, kind="ppt", seed=-1)
    with pytest.raises(ValueError):
        GenSpec(n=3, kind="sparse")
