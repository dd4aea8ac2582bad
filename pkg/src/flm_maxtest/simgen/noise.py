import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from flm_maxtest.constants import DEFAULT_NOISE_DECAY, DEFAULT_NOISE_TERMS
from flm_maxtest.errors import DomainError
from flm_maxtest.hilbert.space import Grid
from flm_maxtest.rng import SeedLike, as_generator
from flm_maxtest.simgen.fourier import fourier_matrix

logger = logging.getLogger(__name__)

NOISE_KINDS = ("scalar_laplace", "functional_laplace")


@dataclass(frozen=True)
class NoiseSpec:
    """
    Attributes:
        kind: unit-variance scalar Laplace noise, or a functional noise
        Σ_{j≤k_terms} η_j φ_j with η_j ~ Laplace(0, √(λ_j/2)), λ_j = j^-decay.
        k_terms: number of Fourier terms of the functional noise.
        decay: eigenvalue decay exponent of the functional noise.
    """

    kind: Literal["scalar_laplace", "functional_laplace"] = "scalar_laplace"
    k_terms: int = DEFAULT_NOISE_TERMS
    decay: float = DEFAULT_NOISE_DECAY

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise DomainError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if self.k_terms < 1:
            raise DomainError(f"k_terms must be >= 1, got {self.k_terms}")
        if not self.decay > 1:
            raise DomainError(f"decay must be > 1, got {self.decay}")

    @property
    def eigenvalues(self) -> NDArray[np.float64]:
        return np.arange(1, self.k_terms + 1, dtype=np.float64) ** -self.decay


def laplace_inverse_cdf(u: ArrayLike, scale: float) -> NDArray[np.float64]:
    """
    Quantile function of the centered Laplace distribution. u = 0.5 maps to
    0 exactly.
    """
    u = np.asarray(u, dtype=np.float64)
    centered = u - 0.5
    tail = np.maximum(1 - 2 * np.abs(centered), np.finfo(np.float64).tiny)
    return np.where(centered == 0, 0.0, -scale * np.sign(centered) * np.log(tail))


def sample_laplace(scale: float, size, seed: SeedLike) -> NDArray[np.float64]:
    """
    I.i.d. centered Laplace draws of variance 2·scale², by inverse CDF of
    uniform draws.
    """
    if not scale > 0:
        raise DomainError(f"Laplace scale must be positive, got {scale}")
    rng = as_generator(seed)
    return laplace_inverse_cdf(rng.random(size), scale)


def sample_noise(
    spec: NoiseSpec,
    n: int,
    grid: Grid | None,
    seed: SeedLike,
) -> NDArray[np.float64]:
    """
    Returns:
        noise (NDArray): n x 1 for scalar noise, n x grid.size for
        functional noise evaluated on `grid`.
    """
    rng = as_generator(seed)
    if spec.kind == "scalar_laplace":
        return sample_laplace(1 / np.sqrt(2), (n, 1), rng)
    if grid is None:
        raise DomainError("functional noise needs a grid")
    scales = np.sqrt(spec.eigenvalues / 2)
    coefficients = laplace_inverse_cdf(rng.random((n, spec.k_terms)), 1.0) * scales
    return coefficients @ fourier_matrix(spec.k_terms, grid.points)
