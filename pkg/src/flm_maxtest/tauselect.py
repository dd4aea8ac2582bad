"""
Data-driven choice of the partial standardization exponent τ.

For every τ of a grid, the bootstrap quantiles are computed with a small
number of replicates, then the power of the test against the observed signal
is estimated by injecting √n V̄ into fresh bootstrap replicates. The rejection
rate of the same fresh replicates without the signal is subtracted, so that
every τ scores exactly 0 when V̄ = 0. The criterion is thus a size-adjusted
rejection count rather than the plain rejection fraction of the
signal-injected replicates. All τ share the same standard normal draws.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from flm_maxtest.constants import DEFAULT_INNER_BOOTSTRAP_REPLICATES, DEFAULT_TAU_GRID
from flm_maxtest.errors import DegenerateDataError, DomainError
from flm_maxtest.maxtest.bootstrap import (
    BootstrapQuantiles,
    bootstrap_draws,
    check_significance,
    max_min_draws,
)
from flm_maxtest.maxtest.scores import Summary
from flm_maxtest.rng import STREAM_TAU_POWER, STREAM_TAU_QUANTILES

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TauPolicy:
    """
    Attributes:
        mode: `fixed` uses `fixed_value`, `grid` selects from `grid`.
        fixed_value: τ in [0, 1) for the fixed mode.
        grid: strictly increasing, non-empty values in [0, 1).
        inner_b: bootstrap replicates used by the selection.
    """

    mode: Literal["fixed", "grid"] = "grid"
    fixed_value: float = 0.0
    grid: tuple[float, ...] = DEFAULT_TAU_GRID
    inner_b: int = DEFAULT_INNER_BOOTSTRAP_REPLICATES

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(t) for t in self.grid))
        problems = self.problems()
        if problems:
            raise DomainError("invalid tau policy: " + "; ".join(problems))

    def problems(self) -> list[str]:
        problems = []
        if self.mode not in ("fixed", "grid"):
            problems.append(f"mode must be 'fixed' or 'grid', got {self.mode!r}")
        if not 0.0 <= self.fixed_value < 1.0:
            problems.append(f"fixed_value must lie in [0, 1), got {self.fixed_value}")
        if not self.grid:
            problems.append("grid must not be empty")
        elif not all(0.0 <= t < 1.0 for t in self.grid):
            problems.append(f"grid values must lie in [0, 1), got {list(self.grid)}")
        elif any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            problems.append(f"grid must be strictly increasing, got {list(self.grid)}")
        if self.inner_b < 2:
            problems.append(f"inner_b must be >= 2, got {self.inner_b}")
        return problems

    @classmethod
    def fixed(cls, tau: float) -> "TauPolicy":
        return cls(mode="fixed", fixed_value=tau)

    @classmethod
    def over_grid(
        cls,
        grid: tuple[float, ...] = DEFAULT_TAU_GRID,
        inner_b: int = DEFAULT_INNER_BOOTSTRAP_REPLICATES,
    ) -> "TauPolicy":
        return cls(mode="grid", grid=tuple(grid), inner_b=inner_b)

    def to_dict(self) -> dict:
        if self.mode == "fixed":
            return {"mode": "fixed", "fixed_value": self.fixed_value}
        return {"mode": "grid", "grid": list(self.grid), "inner_b": self.inner_b}


def power_criteria(
    summary: Summary,
    n: int,
    policy: TauPolicy,
    significance: float,
    seed: int,
) -> np.ndarray:
    """
    Size-adjusted rejection counts of the signal-injected bootstrap, one per
    grid value of `policy`: rejections with √n V̄ injected minus rejections
    of the same fresh draws without it.
    """
    b = policy.inner_b
    z_quantiles = bootstrap_draws(summary, b, seed, STREAM_TAU_QUANTILES)
    z_fresh = bootstrap_draws(summary, b, seed, STREAM_TAU_POWER)
    shift = np.sqrt(n) * summary.mean
    criteria = np.zeros(len(policy.grid), dtype=np.int64)
    for k, tau in enumerate(policy.grid):
        m_samples, l_samples = max_min_draws(summary, tau, z_quantiles)
        quantiles = BootstrapQuantiles.from_samples(m_samples, l_samples, significance)
        m_signal, l_signal = max_min_draws(summary, tau, z_fresh, shift=shift)
        m_null, l_null = max_min_draws(summary, tau, z_fresh)
        power = np.sum((m_signal > quantiles.q_m) | (l_signal < quantiles.q_l))
        size = np.sum((m_null > quantiles.q_m) | (l_null < quantiles.q_l))
        criteria[k] = power - size
    return criteria


def select_tau(
    summary: Summary,
    n: int,
    policy: TauPolicy,
    significance: float,
    seed: int,
) -> float:
    """
    Returns:
        tau (float): `policy.fixed_value` in fixed mode, otherwise the grid
        value with the largest estimated power, ties going to the smallest τ.

    Raises:
        DomainError: for a degenerate summary or an invalid significance.
    """
    check_significance(significance)
    if summary.degenerate:
        raise DegenerateDataError("cannot select tau: every coordinate has zero variance")
    if policy.mode == "fixed":
        return policy.fixed_value
    criteria = power_criteria(summary, n, policy, significance, seed)
    tau = policy.grid[int(np.argmax(criteria))]
    logger.debug(f"tau criteria over {list(policy.grid)}: {criteria.tolist()}")
    logger.debug(f"selected tau={tau}")
    return tau
