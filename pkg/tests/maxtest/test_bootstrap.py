import numpy as np
import pytest
from scipy.stats import ks_2samp, norm

from flm_maxtest.errors import DegenerateDataError, DomainError
from flm_maxtest.maxtest.bootstrap import (
    BootstrapQuantiles,
    bootstrap_quantiles,
    decide,
    max_min_draws,
    max_min_statistics,
    order_statistic,
    simultaneous_intervals,
)
from flm_maxtest.maxtest.scores import Summary, cross_scores, summarize


def quantiles_of(q_m: float, q_l: float, m_samples=(), l_samples=()) -> BootstrapQuantiles:
    return BootstrapQuantiles(
        q_m=q_m,
        q_l=q_l,
        b=len(m_samples),
        m_samples=np.asarray(m_samples, dtype=np.float64),
        l_samples=np.asarray(l_samples, dtype=np.float64),
    )


@pytest.fixture
def correlated_summary() -> Summary:
    cov = np.array([[1.0, 0.5, 0.0], [0.5, 2.0, 0.3], [0.0, 0.3, 0.5]])
    return Summary.from_moments(np.array([0.1, -0.2, 0.05]), cov, n=50)


def test_max_min_statistics_single_coordinate():
    summary = Summary.from_moments(np.array([2.0]), np.array([[16.0]]), n=100)
    t_u, t_l = max_min_statistics(summary, tau=0.5, n=100)
    np.testing.assert_almost_equal(t_u, 10.0)
    np.testing.assert_almost_equal(t_l, 10.0)


@pytest.mark.parametrize("tau", [0.0, 0.3, 1.0])
def test_max_min_statistics_unit_sd(tau):
    summary = Summary.from_moments(np.array([1.0, -3.0]), np.eye(2), n=4)
    assert max_min_statistics(summary, tau=tau, n=4) == (2.0, -6.0)


def test_max_min_statistics_tau_zero_ignores_sd():
    summary = Summary.from_moments(np.array([0.5, -1.0]), np.diag([9.0, 0.25]), n=16)
    assert max_min_statistics(summary, tau=0.0, n=16) == (2.0, -4.0)


def test_max_min_statistics_skips_degenerate_coordinates():
    summary = Summary.from_moments(np.array([5.0, 1.0]), np.diag([0.0, 1.0]), n=4)
    assert max_min_statistics(summary, tau=0.0, n=4) == (2.0, 2.0)


def test_max_min_statistics_all_degenerate():
    summary = Summary.from_moments(np.array([1.0]), np.array([[0.0]]), n=10)
    with pytest.raises(DegenerateDataError):
        max_min_statistics(summary, tau=0.0, n=10)
    with pytest.raises(DegenerateDataError):
        bootstrap_quantiles(summary, tau=0.0, b=100, significance=0.05, seed=0)


def test_order_statistic_is_robust_to_rounding():
    samples = np.arange(1.0, 1001.0)
    assert order_statistic(samples, 0.975) == 975.0
    assert order_statistic(samples, 0.025) == 25.0
    assert order_statistic(np.array([3.0, 1.0, 2.0]), 0.0) == 1.0


def test_bootstrap_quantiles_deterministic(correlated_summary):
    # Act
    first = bootstrap_quantiles(correlated_summary, tau=0.5, b=500, significance=0.05, seed=3)
    second = bootstrap_quantiles(correlated_summary, tau=0.5, b=500, significance=0.05, seed=3)
    other = bootstrap_quantiles(correlated_summary, tau=0.5, b=500, significance=0.05, seed=4)

    # Assert
    np.testing.assert_array_equal(first.m_samples, second.m_samples)
    assert (first.q_m, first.q_l) == (second.q_m, second.q_l)
    assert not np.array_equal(first.m_samples, other.m_samples)
    assert first.b == 500
    assert first.q_l <= first.q_m
    assert np.all(first.l_samples <= first.m_samples)


def test_bootstrap_quantiles_prefix_stable_across_b(correlated_summary):
    small = bootstrap_quantiles(correlated_summary, tau=0.0, b=1000, significance=0.05, seed=1)
    large = bootstrap_quantiles(correlated_summary, tau=0.0, b=2500, significance=0.05, seed=1)
    np.testing.assert_allclose(small.m_samples, large.m_samples[:1000], rtol=1e-12)


def test_bootstrap_quantiles_full_standardization_cancels_scales():
    # Arrange: powers of two keep the rescaled correlation bitwise identical
    cov = np.array([[1.0, 0.4, 0.1], [0.4, 1.5, -0.2], [0.1, -0.2, 0.8]])
    c = np.array([2.0, 4.0, 0.5])
    summary = Summary.from_moments(np.zeros(3), cov, n=40)
    rescaled = Summary.from_moments(np.zeros(3), cov * np.outer(c, c), n=40)

    # Act
    original = bootstrap_quantiles(summary, tau=1.0, b=400, significance=0.1, seed=9)
    scaled = bootstrap_quantiles(rescaled, tau=1.0, b=400, significance=0.1, seed=9)

    # Assert
    assert (original.q_m, original.q_l) == (scaled.q_m, scaled.q_l)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"b": 99, "significance": 0.05, "tau": 0.0},
        {"b": 100, "significance": 1.5, "tau": 0.0},
        {"b": 100, "significance": 0.0, "tau": 0.0},
        {"b": 100, "significance": 0.05, "tau": 1.5},
    ],
)
def test_bootstrap_quantiles_invalid_arguments(correlated_summary, kwargs):
    with pytest.raises(DomainError):
        bootstrap_quantiles(correlated_summary, seed=0, **kwargs)


def test_max_min_draws_with_shift():
    # Arrange: identity factor, so each row of z is a standardized replicate
    summary = Summary(
        mean=np.zeros(2),
        sd=np.array([2.0, 1.0]),
        retained=np.array([True, True]),
        factor=np.eye(2),
        n=10,
    )
    z = np.array([[0.5, -1.0], [0.0, 0.0]])
    shift = np.array([2.0, 1.0])

    # Act
    m_draws, l_draws = max_min_draws(summary, tau=1.0, z=z, shift=shift)

    # Assert: (S* + shift) / sd with S* = sd · z
    np.testing.assert_allclose(m_draws, [1.5, 1.0])
    np.testing.assert_allclose(l_draws, [0.0, 1.0])


def test_decide_rejects_on_max():
    decision = decide(3.0, 0.0, quantiles_of(2.0, -2.0, [1.0, 2.0], [-1.0, -2.0]), 0.05)
    assert decision.reject


def test_decide_boundary_is_strict():
    decision = decide(2.0, -2.0, quantiles_of(2.0, -2.0, [1.0, 2.0], [-1.0, -2.0]), 0.05)
    assert not decision.reject


def test_decide_p_value_lower_tail():
    # Arrange
    quantiles = quantiles_of(4.0, -4.0, [1.0, 2.0, 3.0, 4.0], [-4.0, -3.0, -2.0, -1.0])

    # Act
    decision = decide(3.5, -4.5, quantiles, 0.05)

    # Assert: 2 · min(2/5, 1/5)
    np.testing.assert_almost_equal(decision.p_value, 0.4)
    assert decision.reject


def test_decide_p_value_upper_tail():
    # Arrange
    quantiles = quantiles_of(4.0, -4.0, [1.0, 2.0, 3.0, 4.0], [-4.0, -3.0, -2.0, -1.0])

    # Act
    decision = decide(3.5, -0.5, quantiles, 0.05)

    # Assert: 2 · min(2/5, 5/5)
    np.testing.assert_almost_equal(decision.p_value, 0.8)
    assert not decision.reject


def test_simultaneous_intervals_single_coordinate():
    summary = Summary.from_moments(np.array([0.0]), np.array([[1.0]]), n=100)
    sci = simultaneous_intervals(summary, 0.0, quantiles_of(2.0, -2.0), n=100)
    np.testing.assert_allclose(sci, [[-0.2, 0.2]])


def test_simultaneous_intervals_equal_widths_at_tau_zero(correlated_summary):
    sci = simultaneous_intervals(correlated_summary, 0.0, quantiles_of(2.5, -2.0), n=50)
    widths = sci[:, 1] - sci[:, 0]
    np.testing.assert_allclose(widths, 4.5 / np.sqrt(50))


def test_simultaneous_intervals_degenerate_coordinate():
    summary = Summary.from_moments(np.array([1.0, 3.0]), np.diag([1.0, 0.0]), n=25)
    sci = simultaneous_intervals(summary, 0.5, quantiles_of(2.0, -1.0), n=25)
    np.testing.assert_allclose(sci, [[0.6, 1.2], [3.0, 3.0]])


@pytest.mark.slow
def test_bootstrap_quantile_standard_normal():
    summary = Summary.from_moments(np.zeros(1), np.eye(1), n=100)
    quantiles = bootstrap_quantiles(summary, tau=0.0, b=200_000, significance=0.05, seed=0)
    assert abs(quantiles.q_m - 1.96) <= 0.02
    assert abs(quantiles.q_l + 1.96) <= 0.02


@pytest.mark.slow
def test_bootstrap_quantile_max_of_two_normals():
    summary = Summary.from_moments(np.zeros(2), np.eye(2), n=100)
    quantiles = bootstrap_quantiles(summary, tau=0.0, b=200_000, significance=0.05, seed=0)
    assert abs(quantiles.q_m - norm.ppf(np.sqrt(0.975))) <= 0.02


@pytest.mark.slow
def test_max_statistic_gaussian_and_bootstrap_approximation():
    """
    For non-Gaussian cross scores, √n max_j V̄_j / σ_j^τ is close in KS
    distance to the same maximum of a N(0, Σ) vector, and to its Gaussian
    bootstrap computed from a single dataset.
    """
    # Arrange
    rng = np.random.default_rng(3)
    n, reps, tau = 1000, 5000, 0.5
    mixing = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.6, 0.8, 0.0, 0.0],
            [0.0, 0.5, 1.5, 0.0],
            [0.2, 0.0, 0.3, 0.5],
        ]
    )
    sd = np.sqrt(np.diag(mixing @ mixing.T))

    def cross_scores_sample() -> np.ndarray:
        # unit variance Laplace coordinates
        return (rng.laplace(size=(n, 4)) / np.sqrt(2)) @ mixing.T

    def statistic_and_summary() -> tuple[float, Summary]:
        summary = summarize(cross_scores(cross_scores_sample(), np.ones((n, 1))))
        return max_min_statistics(summary, tau, n)[0], summary

    # Act
    statistics = np.array([statistic_and_summary()[0] for _ in range(reps)])
    gaussian = np.max((rng.standard_normal((reps, 4)) @ mixing.T) / sd**tau, axis=1)
    _, summary = statistic_and_summary()
    m_draws = bootstrap_quantiles(summary, tau, b=reps, significance=0.05, seed=4).m_samples

    # Assert
    assert ks_2samp(statistics, gaussian).statistic <= 0.05
    assert ks_2samp(statistics, m_draws).statistic <= 0.06
