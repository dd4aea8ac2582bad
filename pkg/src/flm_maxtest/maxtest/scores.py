"""
Cross-score vectors and their first two moments.

The covariance Σ̂ of the cross scores is p x p with p = p1·p2, which is large
in the default p1 = n regime. It is kept in factored form: Σ̂ = D F Fᵀ D over
the non-degenerate coordinates, where D = diag(sd) and F is a square-root
factor of the correlation matrix with at most min(p, n) columns.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from flm_maxtest.constants import DEGENERATE_SD_RATIO, PSD_TOLERANCE_RATIO
from flm_maxtest.errors import DomainError, NumericalError
from flm_maxtest.linalg import psd_factor

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CrossScoreMatrix:
    """
    Attributes:
        v: n x p matrix, v[i, j] = xscores[i, j1] * yscores[i, j2] with
        j = j1 * p2 + j2 (0-based, j2 fastest).
        p1: number of predictor scores.
        p2: number of response scores.
    """

    v: NDArray[np.float64]
    p1: int
    p2: int

    def __post_init__(self):
        if self.v.shape[1] != self.p1 * self.p2:
            raise DomainError(
                f"{self.v.shape[1]} columns for p1={self.p1} and p2={self.p2}"
            )

    @property
    def n(self) -> int:
        return self.v.shape[0]

    @property
    def p(self) -> int:
        return self.p1 * self.p2

    def index(self, j1: int, j2: int) -> int:
        """Flat coordinate of the pair (j1, j2), 0-based."""
        if not (0 <= j1 < self.p1 and 0 <= j2 < self.p2):
            raise DomainError(f"pair ({j1}, {j2}) out of range ({self.p1}, {self.p2})")
        return j1 * self.p2 + j2

    def pair(self, j: int) -> tuple[int, int]:
        """Inverse of `index`."""
        if not 0 <= j < self.p:
            raise DomainError(f"coordinate {j} out of range {self.p}")
        return divmod(j, self.p2)


def cross_scores(
    xscores: NDArray[np.float64],
    yscores: NDArray[np.float64],
) -> CrossScoreMatrix:
    """
    Coordinate-wise products of predictor and response scores.

    Raises:
        DomainError: when the score matrices have different numbers of rows.
    """
    xscores = np.atleast_2d(np.asarray(xscores, dtype=np.float64))
    yscores = np.atleast_2d(np.asarray(yscores, dtype=np.float64))
    if xscores.shape[0] != yscores.shape[0]:
        raise DomainError(
            f"score matrices disagree on n: {xscores.shape[0]} vs {yscores.shape[0]}"
        )
    n, p1 = xscores.shape
    p2 = yscores.shape[1]
    v = (xscores[:, :, None] * yscores[:, None, :]).reshape(n, p1 * p2)
    return CrossScoreMatrix(v=v, p1=p1, p2=p2)


@dataclass(frozen=True, eq=False)
class Summary:
    """
    Mean and covariance (1/n convention) of the cross-score vectors.

    Attributes:
        mean: p-vector V̄.
        sd: p-vector of standard deviations σ̂_j.
        retained: mask of the coordinates with sd_j > 1e-12 max sd.
        factor: p_r x k matrix F with F Fᵀ the correlation matrix of the
        retained coordinates.
        n: number of observations the moments were computed from.
    """

    mean: NDArray[np.float64]
    sd: NDArray[np.float64]
    retained: NDArray[np.bool_]
    factor: NDArray[np.float64]
    n: int

    @property
    def p(self) -> int:
        return len(self.mean)

    @property
    def degenerate(self) -> bool:
        return not bool(self.retained.any())

    @cached_property
    def cov(self) -> NDArray[np.float64]:
        """Σ̂, materialized from its factor. Degenerate coordinates are 0."""
        cov = np.zeros((self.p, self.p))
        sd_r = self.sd[self.retained]
        block = (self.factor @ self.factor.T) * np.outer(sd_r, sd_r)
        cov[np.ix_(self.retained, self.retained)] = block
        return cov

    @classmethod
    def from_moments(
        cls,
        mean: NDArray[np.float64],
        cov: NDArray[np.float64],
        n: int,
    ) -> "Summary":
        """
        Build a summary from a known mean and covariance matrix.

        Raises:
            NumericalError: when cov is not symmetric positive semi-definite
            within tolerance.
        """
        mean = np.asarray(mean, dtype=np.float64).reshape(-1)
        cov = np.asarray(cov, dtype=np.float64)
        if cov.shape != (len(mean), len(mean)):
            raise DomainError(f"covariance of shape {cov.shape} for a mean of length {len(mean)}")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=PSD_TOLERANCE_RATIO * max(np.abs(cov).max(), 1.0)):
            raise NumericalError("covariance matrix is not symmetric")
        sd = np.sqrt(np.clip(np.diag(cov), 0.0, None))
        retained = retained_mask(sd)
        sd_r = sd[retained]
        correlation = cov[np.ix_(retained, retained)] / np.outer(sd_r, sd_r)
        factor = psd_factor(correlation)
        return cls(mean=mean, sd=sd, retained=retained, factor=factor, n=n)


def retained_mask(sd: NDArray[np.float64]) -> NDArray[np.bool_]:
    """Coordinates whose standard deviation exceeds 1e-12 times the largest one."""
    largest = float(np.max(sd)) if len(sd) else 0.0
    if largest <= 0:
        return np.zeros(len(sd), dtype=bool)
    return sd > DEGENERATE_SD_RATIO * largest


def summarize(cs: CrossScoreMatrix) -> Summary:
    """
    Mean and 1/n covariance of the cross-score vectors.

    When there are more retained coordinates than observations, the
    correlation factor comes from the n x n Gram matrix of the standardized
    rows, so that Σ̂ is never formed.

    Raises:
        DomainError: when n < 2.
    """
    n = cs.n
    if n < 2:
        raise DomainError(f"need at least 2 cross-score vectors, got {n}")
    mean = cs.v.mean(axis=0)
    centered = cs.v - mean
    sd = np.sqrt(np.mean(centered**2, axis=0))
    retained = retained_mask(sd)
    standardized = centered[:, retained] / sd[retained]
    p_r = standardized.shape[1]

    if p_r <= n:
        correlation = standardized.T @ standardized / n
        factor = psd_factor(correlation)
    else:
        gram = standardized @ standardized.T / n
        eigenvalues, eigenvectors = scipy.linalg.eigh((gram + gram.T) / 2)
        keep = eigenvalues > PSD_TOLERANCE_RATIO * max(float(eigenvalues[-1]), 0.0)
        factor = standardized.T @ eigenvectors[:, keep] / np.sqrt(n)

    logger.debug(
        f"summary: n={n}, p={cs.p}, retained={p_r}, factor rank={factor.shape[1]}"
    )
    return Summary(mean=mean, sd=sd, retained=retained, factor=factor, n=n)
