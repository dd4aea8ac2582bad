import numpy as np
import pytest

from flm_maxtest.errors import DomainError
from flm_maxtest.hilbert.space import Grid, HilbertPoint, Layout, Sample
from flm_maxtest.simgen.fourier import fourier_basis, fourier_matrix
from flm_maxtest.simgen.slopes import (
    FAMILIES,
    VARIANTS,
    SlopeSpec,
    apply_slope,
    apply_slope_sample,
    slope_kernel,
    vector_positions,
)


def test_slope_spec_unknown_family_lists_valid_ones():
    with pytest.raises(DomainError) as excinfo:
        SlopeSpec(family="vector_on_vector")
    for family in FAMILIES:
        assert family in str(excinfo.value)


@pytest.mark.parametrize("kwargs", [{"variant": "dull"}, {"r": -0.1}, {"k_trunc": 0}, {"q": 0}])
def test_slope_spec_invalid(kwargs):
    with pytest.raises(DomainError):
        SlopeSpec(**kwargs)


def test_vector_positions():
    np.testing.assert_equal(vector_positions(1), [0.0])
    np.testing.assert_allclose(vector_positions(5), [0.0, 0.25, 0.5, 0.75, 1.0])


def test_scalar_on_function_sparsest_constant_predictor(unit_grid):
    # Arrange
    spec = SlopeSpec(family="scalar_on_function", variant="sparsest", r=0.5)
    x = HilbertPoint.function(unit_grid, np.ones(unit_grid.size))

    # Act
    y = apply_slope(spec, x)

    # Assert
    assert y.layout == Layout(scalar_dim=1)
    np.testing.assert_almost_equal(y.scalar_part, [0.5], decimal=12)


def test_scalar_on_function_sparse_picks_fourier_coefficient(unit_grid):
    spec = SlopeSpec(family="scalar_on_function", variant="sparse", r=1.0)
    x = HilbertPoint.function(unit_grid, fourier_basis(3, unit_grid.points))
    y = apply_slope(spec, x)
    np.testing.assert_almost_equal(y.scalar_part, [11 / 4 / 5], decimal=10)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("variant", VARIANTS)
def test_zero_signal_strength(unit_grid, rng, family, variant):
    # Arrange
    spec = SlopeSpec(family=family, variant=variant, r=0.0)
    if spec.functional_predictor:
        x = HilbertPoint.function(unit_grid, rng.standard_normal(unit_grid.size))
    else:
        x = HilbertPoint.vector(rng.standard_normal(spec.q))

    # Act
    y = apply_slope(spec, x)

    # Assert
    np.testing.assert_equal(y.coordinates, 0.0)
    assert y.layout.is_functional == spec.functional_response


def test_function_on_function_sparse_coefficients(unit_grid):
    # Arrange
    r = 0.7
    spec = SlopeSpec(family="function_on_function", variant="sparse", r=r)
    x = HilbertPoint.function(unit_grid, fourier_basis(2, unit_grid.points))

    # Act
    y = apply_slope(spec, x, output_grid=unit_grid)

    # Assert
    (grid, values), = y.functional_parts
    coefficients = (fourier_matrix(5, grid.points) * grid.weights) @ values
    k = np.arange(1, 4)
    expected = r * (10 / 4) * 4.0**-1.2 * (k + 2.0) ** -1.2
    np.testing.assert_allclose(coefficients[:3], expected, atol=1e-6)
    np.testing.assert_allclose(coefficients[3:], 0.0, atol=1e-6)


def test_function_on_vector_sparsest(unit_grid):
    spec = SlopeSpec(family="function_on_vector", variant="sparsest", r=2.0, q=3)
    y = apply_slope(spec, HilbertPoint.vector([1.0, -2.0, 4.0]), output_grid=unit_grid)
    np.testing.assert_allclose(y.coordinates, 2.0 * 11 / 10 * 3.0)


def test_function_on_vector_densest_first_component_vanishes(unit_grid):
    # u_1 = 0 so g^1 ≡ 0
    spec = SlopeSpec(family="function_on_vector", variant="densest", r=1.0, q=5)
    kernel, output_layout = slope_kernel(spec, Layout(scalar_dim=5), unit_grid)
    assert kernel.shape == (5, unit_grid.size)
    np.testing.assert_equal(kernel[0], 0.0)
    assert output_layout == Layout(grids=(unit_grid,))


def test_function_on_function_densest_kernel(unit_grid):
    spec = SlopeSpec(family="function_on_function", variant="densest")
    kernel, _ = slope_kernel(spec, Layout(grids=(unit_grid,)), unit_grid)
    np.testing.assert_allclose(kernel[-1, -1], 10 / 4 * np.exp(1 / 2))
    np.testing.assert_equal(kernel[0], 0.0)


@pytest.mark.parametrize(
    "family, layout",
    [
        ("scalar_on_function", Layout(scalar_dim=5)),
        ("function_on_function", Layout(grids=(Grid.uniform(0, 1, 11),), scalar_dim=1)),
        ("function_on_vector", Layout(scalar_dim=4)),
        ("function_on_vector", Layout(grids=(Grid.uniform(0, 1, 11),))),
    ],
)
def test_predictor_must_fit_family(family, layout):
    spec = SlopeSpec(family=family, q=5)
    with pytest.raises(DomainError):
        apply_slope(spec, HilbertPoint.zeros(layout))


def test_apply_slope_sample_matches_elementwise(unit_grid, rng):
    # Arrange
    spec = SlopeSpec(family="function_on_function", variant="dense", r=0.4, k_trunc=20)
    x = Sample(layout=Layout(grids=(unit_grid,)), values=rng.standard_normal((3, unit_grid.size)))

    # Act
    y = apply_slope_sample(spec, x)

    # Assert
    for row, element in zip(y.values, x.elements):
        np.testing.assert_allclose(row, apply_slope(spec, element).coordinates, atol=1e-12)
