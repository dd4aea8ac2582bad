from flm_maxtest.simgen.datasets import (
    DatasetConfig,
    fixed_rotation,
    generate_dataset,
    write_dataset,
)
from flm_maxtest.simgen.fourier import fourier_basis, fourier_matrix
from flm_maxtest.simgen.matern import MaternSpec, matern_cov, sample_gp
from flm_maxtest.simgen.noise import NoiseSpec, laplace_inverse_cdf, sample_laplace, sample_noise
from flm_maxtest.simgen.slopes import (
    FAMILIES,
    VARIANTS,
    SlopeSpec,
    apply_slope,
    apply_slope_sample,
)

__all__ = [
    "DatasetConfig",
    "FAMILIES",
    "MaternSpec",
    "NoiseSpec",
    "SlopeSpec",
    "VARIANTS",
    "apply_slope",
    "apply_slope_sample",
    "fixed_rotation",
    "fourier_basis",
    "fourier_matrix",
    "generate_dataset",
    "laplace_inverse_cdf",
    "matern_cov",
    "sample_gp",
    "sample_laplace",
    "sample_noise",
    "write_dataset",
]
