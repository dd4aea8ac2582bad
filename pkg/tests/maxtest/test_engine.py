import json

import numpy as np
import pytest

from flm_maxtest.errors import ConformabilityError, DegenerateDataError, DomainError
from flm_maxtest.fpca.eigen import fourier_system
from flm_maxtest.hilbert.space import Grid, Layout, Sample
from flm_maxtest.maxtest.engine import TestConfig, canonical_order, run_test
from flm_maxtest.simgen.datasets import DatasetConfig, generate_dataset
from flm_maxtest.simgen.slopes import SlopeSpec
from flm_maxtest.simgen.matern import MaternSpec, sample_gp
from flm_maxtest.tauselect import TauPolicy

QUICK = TestConfig(b=200, tau=TauPolicy.over_grid((0.0, 0.5), inner_b=100), seed=7)


@pytest.fixture
def gp_predictor() -> Sample:
    return sample_gp(Grid.uniform(0, 1, 31), MaternSpec(), n=40, seed=11)


def scalar_sample(values: np.ndarray) -> Sample:
    values = np.asarray(values, dtype=np.float64).reshape(len(values), -1)
    return Sample(layout=Layout(scalar_dim=values.shape[1]), values=values)


def test_config_validation():
    with pytest.raises(DomainError):
        TestConfig(significance=1.5)
    with pytest.raises(DomainError):
        TestConfig(basis="wavelet")
    with pytest.raises(DomainError):
        TestConfig(p1=0)


def test_run_test_perfect_signal_rejects(rng):
    # Arrange: y is exactly the leading predictor coordinate
    x = scalar_sample(rng.standard_normal((50, 3)) * np.array([3.0, 1.0, 0.3]))
    y = scalar_sample(x.values[:, 0])

    # Act
    result = run_test(x, y, QUICK)

    # Assert
    assert result.reject
    assert result.t_u > result.quantiles.q_m
    assert (result.p1, result.p2) == (3, 1)
    assert result.p_value <= 0.05


def test_run_test_functional_signal_rejects(gp_predictor):
    # Arrange: scalar response proportional to ∫ x
    y = scalar_sample(gp_predictor.weighted().sum(axis=1))

    # Act
    result = run_test(gp_predictor, y, QUICK)

    # Assert
    assert result.reject
    assert result.p1 <= gp_predictor.n - 1
    assert result.sci.shape == (result.p1 * result.p2, 2)


def test_run_test_fixed_tau_and_counts(gp_predictor, rng):
    # Arrange
    y = scalar_sample(rng.standard_normal(gp_predictor.n))
    config = TestConfig(p1=4, b=200, tau=TauPolicy.fixed(0.3))

    # Act
    result = run_test(gp_predictor, y, config)

    # Assert
    assert result.tau == 0.3
    assert result.p1 == 4
    assert result.quantiles.b == 200
    assert result.t_l <= result.t_u


def test_run_test_fourier_basis(gp_predictor, rng):
    y = scalar_sample(rng.standard_normal(gp_predictor.n))
    config = TestConfig(p1=5, basis="fourier", b=200, tau=TauPolicy.fixed(0.0))
    result = run_test(gp_predictor, y, config)
    assert result.p1 == 5


def test_run_test_supplied_basis_must_conform(gp_predictor, rng):
    y = scalar_sample(rng.standard_normal(gp_predictor.n))
    basis = fourier_system(Layout(grids=(Grid.uniform(0, 1, 11),)), 3)
    with pytest.raises(ConformabilityError):
        run_test(gp_predictor, y, TestConfig(x_basis=basis, b=200))


def test_run_test_invariant_to_observation_order(gp_predictor, rng):
    # Arrange
    y = scalar_sample(rng.standard_normal(gp_predictor.n))
    permutation = rng.permutation(gp_predictor.n)

    # Act
    result = run_test(gp_predictor, y, QUICK)
    permuted = run_test(gp_predictor.take(permutation), y.take(permutation), QUICK)

    # Assert
    assert result.to_json() == permuted.to_json()


def test_run_test_deterministic_given_seed(gp_predictor, rng):
    y = scalar_sample(rng.standard_normal(gp_predictor.n))
    assert run_test(gp_predictor, y, QUICK).to_json() == run_test(gp_predictor, y, QUICK).to_json()


def test_run_test_size_mismatch(gp_predictor):
    with pytest.raises(DomainError):
        run_test(gp_predictor, scalar_sample(np.ones(gp_predictor.n - 1)), QUICK)


def test_run_test_needs_three_observations():
    x = scalar_sample([[1.0], [2.0]])
    with pytest.raises(DomainError):
        run_test(x, x, QUICK)


def test_run_test_constant_response(gp_predictor):
    with pytest.raises(DegenerateDataError):
        run_test(gp_predictor, scalar_sample(np.full(gp_predictor.n, 3.0)), QUICK)


def test_result_json_document(rng):
    # Arrange
    x = scalar_sample(rng.standard_normal((20, 2)))
    y = scalar_sample(rng.standard_normal((20, 2)))

    # Act
    document = json.loads(run_test(x, y, QUICK).to_json())

    # Assert
    assert list(document) == [
        "t_u",
        "t_l",
        "q_m",
        "q_l",
        "tau",
        "p_value",
        "reject",
        "sci",
        "p1",
        "p2",
        "b",
        "significance",
        "seed",
    ]
    assert len(document["sci"]) == 4
    assert document["seed"] == 7
    assert document["tau"] in (0.0, 0.5)


def test_canonical_order_sorts_by_x_then_y():
    x = scalar_sample([[2.0], [1.0], [1.0]])
    y = scalar_sample([[0.0], [5.0], [4.0]])
    np.testing.assert_equal(canonical_order(x, y), [2, 1, 0])


def test_run_test_invariant_to_joint_rescaling(gp_predictor, rng):
    # Arrange
    y = scalar_sample(gp_predictor.weighted().sum(axis=1) + rng.standard_normal(gp_predictor.n))

    # Act
    result = run_test(gp_predictor, y, QUICK)
    rescaled = run_test(gp_predictor.scaled(4.0), y.scaled(4.0), QUICK)

    # Assert
    assert rescaled.reject == result.reject
    assert rescaled.tau == result.tau
    assert rescaled.p1 == result.p1
    np.testing.assert_allclose(
        rescaled.t_u / rescaled.quantiles.q_m, result.t_u / result.quantiles.q_m, rtol=1e-6
    )


@pytest.mark.slow
@pytest.mark.parametrize("n", [50, 200, 800])
def test_null_quantile_grows_like_sqrt_log_n(n):
    # Arrange
    x, y = generate_dataset(DatasetConfig(slope=SlopeSpec(r=0.0), n=n, seed=n))

    # Act
    result = run_test(x, y, TestConfig(seed=1))

    # Assert
    assert result.quantiles.q_m / np.sqrt(np.log(n)) <= 10.0
