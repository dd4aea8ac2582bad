"""
Synthetic (X, Y) datasets with Y = 1 + β(X) + Z.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from flm_maxtest.constants import MEAN_RESPONSE, VECTOR_PREDICTOR_DECAY
from flm_maxtest.errors import DomainError
from flm_maxtest.hilbert.io import write_sample
from flm_maxtest.hilbert.space import Grid, Layout, Sample
from flm_maxtest.rng import (
    STREAM_DESIGN,
    STREAM_NOISE,
    STREAM_PREDICTOR,
    make_generator,
)
from flm_maxtest.simgen.matern import MaternSpec, sample_gp
from flm_maxtest.simgen.noise import NoiseSpec, sample_laplace, sample_noise
from flm_maxtest.simgen.slopes import SlopeSpec, apply_slope_sample, default_output_grid

logger = logging.getLogger(__name__)


def default_noise(spec: SlopeSpec) -> NoiseSpec:
    kind = "functional_laplace" if spec.functional_response else "scalar_laplace"
    return NoiseSpec(kind=kind)


@dataclass(frozen=True)
class DatasetConfig:
    """
    Attributes:
        slope: family, variant and signal strength.
        noise: defaults to scalar Laplace noise for a scalar response and
        functional Laplace noise otherwise.
        grid: observation grid of the functional predictor and response.
        n: number of (X, Y) pairs.
        seed: seed of this dataset.
        design_seed: seed of the parts of the design that stay fixed across
        a whole study (the rotation of the function-on-vector predictor).
        matern: covariance of the functional predictor.
    """

    slope: SlopeSpec
    n: int
    seed: int
    noise: NoiseSpec | None = None
    grid: Grid = field(default_factory=default_output_grid)
    design_seed: int = 0
    matern: MaternSpec = field(default_factory=MaternSpec)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if self.noise is None:
            object.__setattr__(self, "noise", default_noise(self.slope))
        expected = default_noise(self.slope).kind
        if self.noise.kind != expected:
            raise DomainError(
                f"{self.slope.family} needs {expected} noise, got {self.noise.kind}"
            )


def fixed_rotation(q: int, design_seed: int) -> NDArray[np.float64]:
    """
    Orthogonal q x q matrix from the QR decomposition of a Gaussian matrix,
    with the signs of R's diagonal moved into Q. Depends only on
    (q, design_seed).
    """
    rng = make_generator(design_seed, STREAM_DESIGN, q)
    q_factor, r_factor = scipy.linalg.qr(rng.standard_normal((q, q)))
    signs = np.sign(np.diag(r_factor))
    signs[signs == 0] = 1.0
    return q_factor * signs


def vector_predictor_root(q: int, design_seed: int) -> NDArray[np.float64]:
    """Symmetric square root of Σ = A diag(j^-1.5) Aᵀ."""
    a = fixed_rotation(q, design_seed)
    eigenvalues = np.arange(1, q + 1, dtype=np.float64) ** -VECTOR_PREDICTOR_DECAY
    return (a * np.sqrt(eigenvalues)) @ a.T


def sample_predictor(config: DatasetConfig) -> Sample:
    rng = make_generator(config.seed, STREAM_PREDICTOR)
    if config.slope.functional_predictor:
        return sample_gp(config.grid, config.matern, config.n, rng)
    q = config.slope.q
    coordinates = sample_laplace(1 / np.sqrt(2), (config.n, q), rng)
    values = coordinates @ vector_predictor_root(q, config.design_seed)
    return Sample(layout=Layout(scalar_dim=q), values=values)


def generate_dataset(config: DatasetConfig) -> tuple[Sample, Sample]:
    """
    Returns:
        x (Sample): the predictors.
        y (Sample): the responses Y = 1 + r·g(X) + Z.
    """
    x = sample_predictor(config)
    signal = apply_slope_sample(config.slope, x, config.grid)
    noise = sample_noise(
        config.noise, config.n, config.grid, make_generator(config.seed, STREAM_NOISE)
    )
    y = Sample(layout=signal.layout, values=MEAN_RESPONSE + signal.values + noise)
    logger.debug(
        f"dataset {config.slope.family}/{config.slope.variant}: r={config.slope.r}, "
        f"n={config.n}, seed={config.seed}"
    )
    return x, y


def write_dataset(x: Sample, y: Sample, save_dir: Path) -> list[Path]:
    """
    Export a dataset in the CSV layout: `x.csv` or `x_scalars.csv`, and
    `y.csv` or `y_scalars.csv`.

    Returns:
        filepaths (list[Path]): the written files.
    """
    save_dir.mkdir(parents=True, exist_ok=True)
    filepaths = []
    for name, sample in (("x", x), ("y", y)):
        if sample.layout.is_functional:
            filepath = save_dir / f"{name}.csv"
            write_sample(sample, path=filepath)
        else:
            filepath = save_dir / f"{name}_scalars.csv"
            write_sample(sample, scalars_path=filepath)
        filepaths.append(filepath)
    logger.info(f"dataset of {x.n} pairs written to {save_dir}")
    return filepaths
