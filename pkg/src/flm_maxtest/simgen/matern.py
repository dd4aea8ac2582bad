"""
Matérn Gaussian processes on a grid.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.special
from numpy.typing import ArrayLike, NDArray

from flm_maxtest.errors import DomainError
from flm_maxtest.hilbert.space import Grid, Layout, Sample
from flm_maxtest.linalg import psd_factor
from flm_maxtest.rng import SeedLike, as_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MaternSpec:
    nu: float = 1.0
    rho: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        for name in ("nu", "rho", "sigma"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"Matérn {name} must be positive, got {value}")


def matern_cov(
    s: ArrayLike,
    t: ArrayLike,
    spec: MaternSpec = MaternSpec(),
) -> NDArray[np.float64] | float:
    """
    C(s, t) = σ² 2^(1-ν) / Γ(ν) · (√(2ν)|s-t|/ρ)^ν · K_ν(√(2ν)|s-t|/ρ),
    with C(t, t) = σ². Broadcasts over `s` and `t`.
    """
    distance = np.abs(np.asarray(s, dtype=np.float64) - np.asarray(t, dtype=np.float64))
    scaled = np.sqrt(2 * spec.nu) * distance / spec.rho
    positive = scaled > 0
    safe = np.where(positive, scaled, 1.0)
    values = (
        spec.sigma**2
        * 2 ** (1 - spec.nu)
        / scipy.special.gamma(spec.nu)
        * safe**spec.nu
        * scipy.special.kv(spec.nu, safe)
    )
    values = np.where(positive, values, spec.sigma**2)
    return float(values) if values.ndim == 0 else values


def matern_matrix(points: NDArray[np.float64], spec: MaternSpec) -> NDArray[np.float64]:
    return matern_cov(points[:, None], points[None, :], spec)


def sample_gp(
    grid: Grid,
    spec: MaternSpec,
    n: int,
    seed: SeedLike,
) -> Sample:
    """
    n independent centered Gaussian paths with Matérn covariance on `grid`,
    drawn through the symmetric eigen-factor of the covariance matrix.

    Raises:
        DomainError: when n < 1.
        NumericalError: when the covariance matrix is indefinite beyond
        tolerance.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    factor = psd_factor(matern_matrix(grid.points, spec))
    rng = as_generator(seed)
    paths = rng.standard_normal((n, grid.size)) @ factor.T
    return Sample(layout=Layout(grids=(grid,)), values=paths)
