"""
Empirical covariance operators and their Mercer decompositions.

The eigensolver works on the n x n Gram matrix G_il = n^-1 <X_i, X_l> (duality
method) so the cost is O(n^2 dim + n^3) and the eigenelements are orthonormal
under the quadrature inner product by construction.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
import scipy.linalg
from numpy.typing import NDArray

from flm_maxtest.constants import EIGENVALUE_CUTOFF_RATIO
from flm_maxtest.errors import DomainError
from flm_maxtest.hilbert.space import HilbertPoint, Layout, Sample
from flm_maxtest.simgen.fourier import fourier_matrix, max_aliasing_free_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """
    Finite orthonormal sequence in a Hilbert space, stored as a
    count x layout.dim matrix of flat coordinates.
    """

    layout: Layout
    vectors: NDArray[np.float64]

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64).reshape(-1, self.layout.dim)
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def eigenelements(self) -> list[HilbertPoint]:
        return [HilbertPoint(self.layout, v) for v in self.vectors]

    def gram(self) -> NDArray[np.float64]:
        """Matrix of pairwise inner products of the basis elements."""
        return (self.vectors * self.layout.weights) @ self.vectors.T

    def truncate(self, count: int) -> "OrthonormalBasis":
        return OrthonormalBasis(self.layout, self.vectors[:count])


@dataclass(frozen=True, eq=False)
class EigenSystem(OrthonormalBasis):
    """
    Leading eigenpairs of an empirical covariance operator: non-increasing,
    non-negative eigenvalues and orthonormal eigenelements.
    """

    eigenvalues: NDArray[np.float64] = None

    def __post_init__(self):
        super().__post_init__()
        eigenvalues = np.array(self.eigenvalues, dtype=np.float64).reshape(-1)
        if len(eigenvalues) != self.count:
            raise DomainError(
                f"{len(eigenvalues)} eigenvalues for {self.count} eigenelements"
            )
        eigenvalues.setflags(write=False)
        object.__setattr__(self, "eigenvalues", eigenvalues)

    def truncate(self, count: int) -> "EigenSystem":
        return EigenSystem(self.layout, self.vectors[:count], self.eigenvalues[:count])


def fix_signs(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Scale every row so that its entry of largest magnitude is positive
    (functional coordinates come before scalar ones; ties go to the earliest
    index).
    """
    idx = np.argmax(np.abs(vectors), axis=1)
    signs = np.sign(vectors[np.arange(len(vectors)), idx])
    signs[signs == 0] = 1.0
    return vectors * signs[:, None]


def empirical_eigensystem(sample: Sample, max_components: int) -> EigenSystem:
    """
    Leading min(max_components, numerical rank) eigenpairs of the sample
    covariance operator n^-1 Σ X_i ⊗ X_i.

    Eigenvalues below 1e-12 λ_1 are discarded and at most n - 1 components
    are retained.

    Raises:
        DomainError: when the sample is not centered, n < 2, or
        max_components < 1.
    """
    if not sample.centered:
        raise DomainError("the eigensystem is computed from a centered sample")
    if sample.n < 2:
        raise DomainError(f"need at least 2 observations, got {sample.n}")
    if max_components < 1:
        raise DomainError(f"max_components must be >= 1, got {max_components}")

    n = sample.n
    gram = (sample.weighted() @ sample.values.T) / n
    gram = (gram + gram.T) / 2
    eigenvalues, eigenvectors = scipy.linalg.eigh(gram)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    if eigenvalues[0] <= 0:
        logger.info("all-zero sample, returning an empty eigensystem")
        return EigenSystem(sample.layout, np.zeros((0, sample.layout.dim)), np.zeros(0))

    rank = int(np.sum(eigenvalues > EIGENVALUE_CUTOFF_RATIO * eigenvalues[0]))
    count = min(max_components, rank, n - 1)
    eigenvalues = eigenvalues[:count]
    elements = (sample.values.T @ eigenvectors[:, :count]) / np.sqrt(n * eigenvalues)
    elements = fix_signs(elements.T)
    logger.debug(
        f"eigensystem: n={n}, dim={sample.layout.dim}, rank={rank}, retained={count}"
    )
    return EigenSystem(sample.layout, elements, eigenvalues)


def project_scores(sample: Sample, basis: OrthonormalBasis) -> NDArray[np.float64]:
    """
    Score matrix: entry (i, j) is the inner product of element i with basis
    element j.

    Raises:
        ConformabilityError: when the sample and basis layouts differ.
    """
    sample.layout.check_conformable(basis.layout)
    return sample.weighted() @ basis.vectors.T


def fourier_system(layout: Layout, count: int) -> OrthonormalBasis:
    """
    Fixed orthonormal basis of a direct-sum space: canonical vectors of the
    scalar part first, then Fourier functions rescaled to each L² component's
    domain, interleaved across components by index. Each component
    contributes at most as many Fourier functions as its grid resolves
    without aliasing.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    offsets = layout.offsets
    scalar_offset = offsets[-1]
    vectors = []
    for j in range(layout.scalar_dim):
        v = np.zeros(layout.dim)
        v[scalar_offset + j] = 1.0
        vectors.append(v)

    per_component = []
    for k, grid in enumerate(layout.grids):
        length = grid.stop - grid.start
        cap = max_aliasing_free_index(grid.size)
        functions = fourier_matrix(cap, (grid.points - grid.start) / length)
        per_component.append((offsets[k], functions / np.sqrt(length)))
    depth = max((f.shape[0] for _, f in per_component), default=0)
    for j in range(depth):
        for offset, functions in per_component:
            if j < functions.shape[0]:
                v = np.zeros(layout.dim)
                v[offset : offset + functions.shape[1]] = functions[j]
                vectors.append(v)

    if count > len(vectors):
        logger.warning(
            f"requested {count} fixed basis elements, only {len(vectors)} are available"
        )
    return OrthonormalBasis(layout, np.array(vectors[:count]).reshape(-1, layout.dim))


def write_eigensystem(system: EigenSystem, path: Path) -> Path:
    """
    Export the eigenelements (one column per element, one row per
    coordinate) to `path` and the eigenvalues next to it.

    Returns:
        filepath_eigenvalues (Path): the eigenvalues CSV.
    """
    layout = system.layout
    components = []
    points = []
    for k, grid in enumerate(layout.grids):
        components.extend([f"L2_{k + 1}"] * grid.size)
        points.extend(grid.points.tolist())
    components.extend(["scalar"] * layout.scalar_dim)
    points.extend(range(1, layout.scalar_dim + 1))
    df = pd.DataFrame({"component": components, "point": points})
    for j, v in enumerate(system.vectors, start=1):
        df[f"phi_{j}"] = v
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False)
    filepath_eigenvalues = path.with_name(f"{path.stem}_eigenvalues.csv")
    pd.DataFrame(
        {"index": np.arange(1, system.count + 1), "eigenvalue": system.eigenvalues}
    ).to_csv(filepath_eigenvalues, index=False)
    return filepath_eigenvalues
