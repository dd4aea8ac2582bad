"""
Pytest configuration file for the flm-maxtest project.
"""

import numpy as np
import pytest

from flm_maxtest.fpca.eigen import EigenSystem
from flm_maxtest.hilbert.space import Grid, Layout
from flm_maxtest.simgen.matern import MaternSpec, matern_matrix


@pytest.fixture
def unit_grid() -> Grid:
    """101 equispaced points on [0, 1]."""
    return Grid.uniform(0.0, 1.0, 101)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def population_eigensystem():
    """
    Factory of the leading eigenpairs of the covariance operator of a Matérn
    process, discretized with the trapezoid weights of the grid.
    """

    def make(grid: Grid, spec: MaternSpec, count: int) -> EigenSystem:
        root_w = np.sqrt(grid.weights)
        cov = matern_matrix(grid.points, spec)
        eigenvalues, eigenvectors = np.linalg.eigh(root_w[:, None] * cov * root_w[None, :])
        order = np.argsort(eigenvalues)[::-1][:count]
        vectors = (eigenvectors[:, order] / root_w[:, None]).T
        return EigenSystem(Layout(grids=(grid,)), vectors, eigenvalues[order])

    return make
