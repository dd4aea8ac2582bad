import numpy as np
import pytest
import scipy.special

from flm_maxtest.errors import DomainError
from flm_maxtest.hilbert.space import Grid
from flm_maxtest.simgen.matern import MaternSpec, matern_cov, matern_matrix, sample_gp

# K_1(1) from published tables
BESSEL_K1_AT_1 = 0.6019072301972346


def test_matern_cov_zero_distance():
    assert matern_cov(0.3, 0.3) == 1.0
    assert matern_cov(0.3, 0.3, MaternSpec(sigma=2.0)) == 4.0


def test_matern_cov_unit_scaled_distance():
    # √(2ν)|s - t| / ρ = 1 with ν = ρ = σ = 1
    value = matern_cov(0.0, 1 / np.sqrt(2))
    np.testing.assert_allclose(value, BESSEL_K1_AT_1, rtol=1e-12)


def test_matern_cov_unit_distance():
    value = matern_cov(0.0, 1.0)
    np.testing.assert_allclose(value, np.sqrt(2) * scipy.special.kv(1, np.sqrt(2)), rtol=1e-12)


def test_matern_cov_symmetric_and_decreasing(rng):
    s = rng.uniform(0, 1, 20)
    t = rng.uniform(0, 1, 20)
    np.testing.assert_array_equal(matern_cov(s, t), matern_cov(t, s))
    values = matern_cov(0.0, np.linspace(0, 2, 21))
    assert np.all(np.diff(values) < 0)


def test_matern_matrix_positive_semi_definite():
    points = np.linspace(0, 1, 51)
    eigenvalues = np.linalg.eigvalsh(matern_matrix(points, MaternSpec(nu=2.5, rho=0.3)))
    assert eigenvalues[0] > -1e-10 * eigenvalues[-1]


@pytest.mark.parametrize("kwargs", [{"nu": 0.0}, {"rho": -1.0}, {"sigma": 0.0}])
def test_matern_spec_invalid(kwargs):
    with pytest.raises(DomainError):
        MaternSpec(**kwargs)


def test_sample_gp_moments():
    # Arrange
    grid = Grid.uniform(0, 1, 11)

    # Act
    sample = sample_gp(grid, MaternSpec(), n=10_000, seed=0)

    # Assert
    values = sample.values
    assert values.shape == (10_000, 11)
    assert np.max(np.abs(values.mean(axis=0))) < 0.04
    np.testing.assert_allclose(values.var(axis=0), 1.0, rtol=0.05)
    covariance = np.mean(values[:, 2] * values[:, 8]) - values[:, 2].mean() * values[:, 8].mean()
    assert abs(covariance - matern_cov(0.2, 0.8)) < 0.05


def test_sample_gp_deterministic():
    grid = Grid.uniform(0, 1, 21)
    first = sample_gp(grid, MaternSpec(), n=5, seed=3)
    second = sample_gp(grid, MaternSpec(), n=5, seed=3)
    np.testing.assert_array_equal(first.values, second.values)
    assert first.layout.grids == (grid,)


def test_sample_gp_invalid_n():
    with pytest.raises(DomainError):
        sample_gp(Grid.uniform(0, 1, 11), MaternSpec(), n=0, seed=0)
