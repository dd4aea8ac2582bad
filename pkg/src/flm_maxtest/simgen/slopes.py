"""
Slope operators of the three simulation families, each with four variants
ordered from the sparsest to the densest spectral signal.

Every slope is stored as a kernel matrix K (input coordinates x output
coordinates) so that β(x) = r · (weighted x) @ K: quadrature over s for
functional predictors, a plain sum over components for vector predictors.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from flm_maxtest.constants import (
    DEFAULT_DOMAIN,
    DEFAULT_GRID_SIZE,
    DEFAULT_K_TRUNC,
    DEFAULT_Q,
)
from flm_maxtest.errors import DomainError
from flm_maxtest.hilbert.space import Grid, HilbertPoint, Layout, Sample
from flm_maxtest.simgen.fourier import fourier_matrix

logger = logging.getLogger(__name__)

FAMILIES = ("scalar_on_function", "function_on_function", "function_on_vector")
VARIANTS = ("sparsest", "sparse", "dense", "densest")

Family = Literal["scalar_on_function", "function_on_function", "function_on_vector"]
Variant = Literal["sparsest", "sparse", "dense", "densest"]


@dataclass(frozen=True)
class SlopeSpec:
    """
    β = r · g for the slope g of a family and variant.

    Attributes:
        k_trunc: number of Fourier terms of the dense variants.
        q: predictor dimension of the function-on-vector family.
    """

    family: Family = "scalar_on_function"
    variant: Variant = "sparse"
    r: float = 0.0
    k_trunc: int = DEFAULT_K_TRUNC
    q: int = DEFAULT_Q

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}, valid families: {list(FAMILIES)}")
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown variant {self.variant!r}, valid variants: {list(VARIANTS)}")
        if not self.r >= 0:
            raise DomainError(f"r must be >= 0, got {self.r}")
        if self.k_trunc < 1:
            raise DomainError(f"k_trunc must be >= 1, got {self.k_trunc}")
        if self.q < 1:
            raise DomainError(f"q must be >= 1, got {self.q}")

    @property
    def functional_response(self) -> bool:
        return self.family != "scalar_on_function"

    @property
    def functional_predictor(self) -> bool:
        return self.family != "function_on_vector"


def decaying_series(count: int, coefficient: float, exponent: float, t: NDArray[np.float64]):
    """Σ_{j≤count} coefficient · (j+2)^-exponent · φ_j(t)."""
    j = np.arange(1, count + 1)
    return coefficient * ((j + 2.0) ** -exponent) @ fourier_matrix(count, t)


def vector_positions(q: int) -> NDArray[np.float64]:
    """(j-1)/(q-1) for j = 1..q, or 0 when q = 1."""
    if q == 1:
        return np.zeros(1)
    return np.arange(q) / (q - 1)


def scalar_on_function_kernel(spec: SlopeSpec, s: NDArray[np.float64]) -> NDArray[np.float64]:
    match spec.variant:
        case "sparsest":
            g = np.ones_like(s)
        case "sparse":
            g = decaying_series(3, 11 / 4, 1.0, s)
        case "dense":
            g = decaying_series(spec.k_trunc, 12 / 4, 1.0, s)
        case "densest":
            g = 6 / 4 * s**2 * np.exp(s)
    return g[:, None]


def function_on_function_kernel(
    spec: SlopeSpec,
    s: NDArray[np.float64],
    t: NDArray[np.float64],
) -> NDArray[np.float64]:
    match spec.variant:
        case "sparsest":
            return np.full((len(s), len(t)), 5 / 7)
        case "sparse":
            return np.outer(decaying_series(3, 10 / 4, 1.2, s), decaying_series(3, 1.0, 1.2, t))
        case "dense":
            k = spec.k_trunc
            return np.outer(decaying_series(k, 9 / 4, 1.2, s), decaying_series(k, 1.0, 1.2, t))
        case "densest":
            return 10 / 4 * np.outer(s**2 * np.exp(s / 4), t**2 * np.exp(t / 4))


def function_on_vector_kernel(spec: SlopeSpec, t: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Row m holds g^m(t). The basis sums run over their own index; the
    component index m enters through its position u_m = (m-1)/(q-1).
    """
    u = vector_positions(spec.q)
    match spec.variant:
        case "sparsest":
            return np.full((spec.q, len(t)), 11 / 10)
        case "sparse":
            return np.outer(decaying_series(3, 11 / 4, 1.2, u), decaying_series(3, 1.0, 1.2, t))
        case "dense":
            k = spec.k_trunc
            return np.outer(decaying_series(k, 6 / 4, 1.2, u), decaying_series(k, 1.0, 1.2, t))
        case "densest":
            return 11 / 4 * np.outer(u**2 * np.exp(u / 8), t**2 * np.exp(t / 8))


def default_output_grid() -> Grid:
    return Grid.uniform(*DEFAULT_DOMAIN, DEFAULT_GRID_SIZE)


def check_predictor(spec: SlopeSpec, layout: Layout) -> None:
    """
    Raises:
        DomainError: when the predictor layout does not fit the family.
    """
    if spec.functional_predictor:
        if len(layout.grids) != 1 or layout.scalar_dim != 0:
            raise DomainError(
                f"{spec.family} needs a single L² predictor, got {layout.describe()}"
            )
    elif layout.grids or layout.scalar_dim != spec.q:
        raise DomainError(
            f"{spec.family} needs a vector predictor of length {spec.q}, "
            f"got {layout.describe()}"
        )


def slope_kernel(
    spec: SlopeSpec,
    layout: Layout,
    output_grid: Grid | None = None,
) -> tuple[NDArray[np.float64], Layout]:
    """
    Returns:
        kernel (NDArray): layout.dim x output dimension matrix of g.
        output_layout (Layout): layout of β(x).
    """
    check_predictor(spec, layout)
    output_grid = output_grid or default_output_grid()
    match spec.family:
        case "scalar_on_function":
            kernel = scalar_on_function_kernel(spec, layout.grids[0].points)
            return kernel, Layout(scalar_dim=1)
        case "function_on_function":
            kernel = function_on_function_kernel(spec, layout.grids[0].points, output_grid.points)
        case "function_on_vector":
            kernel = function_on_vector_kernel(spec, output_grid.points)
    return kernel, Layout(grids=(output_grid,))


def apply_slope_sample(
    spec: SlopeSpec,
    x: Sample,
    output_grid: Grid | None = None,
) -> Sample:
    """β applied to every element of `x`."""
    kernel, output_layout = slope_kernel(spec, x.layout, output_grid)
    return Sample(layout=output_layout, values=spec.r * (x.weighted() @ kernel))


def apply_slope(
    spec: SlopeSpec,
    x: HilbertPoint,
    output_grid: Grid | None = None,
) -> HilbertPoint:
    """
    r · g applied to `x`: ∫ g x for scalar-on-function, ∫ g(s, ·) x(s) ds for
    function-on-function and Σ_m x_m g^m for function-on-vector.

    Raises:
        DomainError: when `x` does not fit the family.
    """
    sample = Sample(layout=x.layout, values=x.coordinates[None, :])
    return apply_slope_sample(spec, sample, output_grid).elements[0]
