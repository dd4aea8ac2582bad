"""
Partially standardized max/min statistics and their Gaussian bootstrap.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from flm_maxtest.constants import BOOTSTRAP_BLOCK_SIZE, MIN_BOOTSTRAP_REPLICATES
from flm_maxtest.errors import DegenerateDataError, DomainError
from flm_maxtest.maxtest.scores import Summary
from flm_maxtest.rng import STREAM_BOOTSTRAP, block_standard_normal

logger = logging.getLogger(__name__)

# Rows of bootstrap draws expanded to p coordinates at once
_EXPANSION_CHUNK = 256


@dataclass(frozen=True, eq=False)
class BootstrapQuantiles:
    """
    Attributes:
        q_m: empirical 1 - ϱ/2 quantile of the max replicates M*.
        q_l: empirical ϱ/2 quantile of the min replicates L*.
        b: number of replicates.
        m_samples: the b replicates M*.
        l_samples: the b replicates L*.
    """

    q_m: float
    q_l: float
    b: int
    m_samples: NDArray[np.float64]
    l_samples: NDArray[np.float64]

    @classmethod
    def from_samples(
        cls,
        m_samples: NDArray[np.float64],
        l_samples: NDArray[np.float64],
        significance: float,
    ) -> "BootstrapQuantiles":
        m_samples = np.asarray(m_samples, dtype=np.float64)
        l_samples = np.asarray(l_samples, dtype=np.float64)
        return cls(
            q_m=order_statistic(m_samples, 1 - significance / 2),
            q_l=order_statistic(l_samples, significance / 2),
            b=len(m_samples),
            m_samples=m_samples,
            l_samples=l_samples,
        )


@dataclass(frozen=True)
class Decision:
    reject: bool
    p_value: float


def order_statistic(samples: NDArray[np.float64], level: float) -> float:
    """
    Type-1 empirical quantile: the ⌈level·b⌉-th smallest of b samples.
    """
    b = len(samples)
    # guard against level·b landing a rounding error above an integer
    k = min(max(math.ceil(level * b - 1e-9), 1), b)
    return float(np.partition(samples, k - 1)[k - 1])


def check_significance(significance: float) -> None:
    """
    Raises:
        DomainError: unless 0 < significance < 1.
    """
    if not 0.0 < significance < 1.0:
        raise DomainError(f"significance must lie in (0, 1), got {significance}")


def check_tau(tau: float) -> None:
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau must lie in [0, 1], got {tau}")


def max_min_statistics(summary: Summary, tau: float, n: int) -> tuple[float, float]:
    """
    T_U = max_j √n V̄_j / σ̂_j^τ and T_L = min_j √n V̄_j / σ̂_j^τ over the
    non-degenerate coordinates.

    Raises:
        DegenerateDataError: when every coordinate is degenerate.
    """
    check_tau(tau)
    if summary.degenerate:
        raise DegenerateDataError("every cross-score coordinate has zero variance")
    retained = summary.retained
    standardized = np.sqrt(n) * summary.mean[retained] / summary.sd[retained] ** tau
    return float(standardized.max()), float(standardized.min())


def bootstrap_draws(summary: Summary, b: int, seed: int, stream: int) -> NDArray[np.float64]:
    """
    b x rank standard normal draws that `max_min_draws` expands into
    N(0, Σ̂) replicates. Row blocks come from independent seed streams.
    """
    return block_standard_normal(
        seed, stream, size=b, dim=summary.factor.shape[1], block_size=BOOTSTRAP_BLOCK_SIZE
    )


def max_min_draws(
    summary: Summary,
    tau: float,
    z: NDArray[np.float64],
    shift: NDArray[np.float64] | None = None,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Max and min over the retained coordinates of (S* + shift) / σ̂^τ, with
    S* = D F z the N(0, Σ̂) replicate generated by each row z.

    Returns:
        m_draws (NDArray): b maxima.
        l_draws (NDArray): b minima.
    """
    sd_r = summary.sd[summary.retained]
    scale = sd_r ** (1.0 - tau)
    offset = None if shift is None else shift[summary.retained] / sd_r**tau
    m_draws = np.empty(len(z))
    l_draws = np.empty(len(z))
    for start in range(0, len(z), _EXPANSION_CHUNK):
        stop = start + _EXPANSION_CHUNK
        w = (z[start:stop] @ summary.factor.T) * scale
        if offset is not None:
            w += offset
        m_draws[start:stop] = w.max(axis=1)
        l_draws[start:stop] = w.min(axis=1)
    return m_draws, l_draws


def bootstrap_quantiles(
    summary: Summary,
    tau: float,
    b: int,
    significance: float,
    seed: int,
    stream: int = STREAM_BOOTSTRAP,
) -> BootstrapQuantiles:
    """
    Gaussian bootstrap of the max/min statistics: b draws S* ~ N_p(0, Σ̂)
    through the PSD factor of Σ̂, M* = max_j S*_j / σ̂_j^τ and
    L* = min_j S*_j / σ̂_j^τ over the retained coordinates.

    Returns:
        quantiles (BootstrapQuantiles): q_m is the ⌈(1 - ϱ/2) b⌉-th smallest
        M*, q_l the ⌈(ϱ/2) b⌉-th smallest L*.

    Raises:
        DomainError: invalid significance, tau, or b < 100.
        DegenerateDataError: when every coordinate is degenerate.
    """
    check_significance(significance)
    check_tau(tau)
    if b < MIN_BOOTSTRAP_REPLICATES:
        raise DomainError(f"need at least {MIN_BOOTSTRAP_REPLICATES} replicates, got {b}")
    if summary.degenerate:
        raise DegenerateDataError("every cross-score coordinate has zero variance")
    z = bootstrap_draws(summary, b, seed, stream)
    m_samples, l_samples = max_min_draws(summary, tau, z)
    quantiles = BootstrapQuantiles.from_samples(m_samples, l_samples, significance)
    logger.debug(
        f"bootstrap: b={b}, tau={tau}, q_m={quantiles.q_m:.4f}, q_l={quantiles.q_l:.4f}"
    )
    return quantiles


def decide(
    t_u: float,
    t_l: float,
    quantiles: BootstrapQuantiles,
    significance: float,
) -> Decision:
    """
    Reject when T_U > q_m or T_L < q_l (strict inequalities).

    The p-value doubles the smaller of the two add-one smoothed bootstrap
    tail frequencies. It is advisory: the decision is the quantile rule.
    """
    check_significance(significance)
    reject = bool(t_u > quantiles.q_m or t_l < quantiles.q_l)
    b = quantiles.b
    upper = (1 + int(np.sum(quantiles.m_samples >= t_u))) / (b + 1)
    lower = (1 + int(np.sum(quantiles.l_samples <= t_l))) / (b + 1)
    p_value = min(1.0, 2 * min(upper, lower))
    return Decision(reject=reject, p_value=p_value)


def simultaneous_intervals(
    summary: Summary,
    tau: float,
    quantiles: BootstrapQuantiles,
    n: int,
) -> NDArray[np.float64]:
    """
    Simultaneous confidence intervals for the coordinates of the mean cross
    score: [V̄_j - n^-1/2 σ̂_j^τ q_m, V̄_j - n^-1/2 σ̂_j^τ q_l].
    Degenerate coordinates get the point interval [V̄_j, V̄_j].

    Returns:
        sci (NDArray): p x 2 matrix of (lower, upper) bounds.
    """
    scale = np.where(summary.retained, summary.sd**tau, 0.0) / np.sqrt(n)
    lower = summary.mean - scale * quantiles.q_m
    upper = summary.mean - scale * quantiles.q_l
    return np.column_stack([lower, upper])
