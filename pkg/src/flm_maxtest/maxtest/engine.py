"""
End-to-end test of H0: β = 0 in Y = β(X) + Z.

Both samples are put in a canonical order before anything is computed, so the
result only depends on the set of (X_i, Y_i) pairs and the seed.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from flm_maxtest import tauselect
from flm_maxtest.constants import DEFAULT_BOOTSTRAP_REPLICATES, DEFAULT_SIGNIFICANCE
from flm_maxtest.errors import DegenerateDataError, DomainError
from flm_maxtest.fpca.eigen import (
    OrthonormalBasis,
    empirical_eigensystem,
    fourier_system,
    project_scores,
)
from flm_maxtest.hilbert.space import Sample, center
from flm_maxtest.maxtest.bootstrap import (
    BootstrapQuantiles,
    bootstrap_quantiles,
    check_significance,
    decide,
    max_min_statistics,
    simultaneous_intervals,
)
from flm_maxtest.maxtest.scores import Summary, cross_scores, summarize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TestConfig:
    """
    Attributes:
        p1: number of predictor basis elements, defaults to min(n, rank) for
        a functional predictor and to its dimension otherwise.
        p2: same for the response.
        tau: τ policy, fixed value or selection over a grid.
        b: bootstrap replicates of the final test.
        significance: level ϱ.
        seed: root seed of every random draw.
        basis: `empirical` eigensystems or the `fourier` system. Ignored for
        a side whose basis is supplied through `x_basis` or `y_basis`.
    """

    __test__ = False

    p1: int | None = None
    p2: int | None = None
    tau: "tauselect.TauPolicy" = field(default_factory=lambda: tauselect.TauPolicy())
    b: int = DEFAULT_BOOTSTRAP_REPLICATES
    significance: float = DEFAULT_SIGNIFICANCE
    seed: int = 0
    basis: Literal["empirical", "fourier"] = "empirical"
    x_basis: OrthonormalBasis | None = None
    y_basis: OrthonormalBasis | None = None

    def __post_init__(self):
        check_significance(self.significance)
        if self.basis not in ("empirical", "fourier"):
            raise DomainError(f"basis must be 'empirical' or 'fourier', got {self.basis!r}")
        for name in ("p1", "p2"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise DomainError(f"{name} must be >= 1, got {value}")


@dataclass(frozen=True, eq=False)
class TestResult:
    __test__ = False

    t_u: float
    t_l: float
    quantiles: BootstrapQuantiles
    tau: float
    reject: bool
    p_value: float
    sci: NDArray[np.float64]
    significance: float
    p1: int
    p2: int
    seed: int
    summary: Summary | None = None

    def to_dict(self) -> dict:
        return {
            "t_u": self.t_u,
            "t_l": self.t_l,
            "q_m": self.quantiles.q_m,
            "q_l": self.quantiles.q_l,
            "tau": self.tau,
            "p_value": self.p_value,
            "reject": self.reject,
            "sci": self.sci.tolist(),
            "p1": self.p1,
            "p2": self.p2,
            "b": self.quantiles.b,
            "significance": self.significance,
            "seed": self.seed,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def canonical_order(x: Sample, y: Sample) -> NDArray[np.int_]:
    """
    Lexicographic order of the observations by their X then Y coordinates.
    """
    keys = np.hstack([x.values, y.values])
    return np.lexsort(keys.T[::-1])


def default_count(sample: Sample) -> int:
    """min(n, rank) for a functional sample, the dimension of a Euclidean one."""
    if sample.layout.is_functional:
        return sample.n
    return sample.layout.scalar_dim


def resolve_basis(
    sample: Sample,
    count: int | None,
    supplied: OrthonormalBasis | None,
    kind: str,
    side: str,
) -> OrthonormalBasis:
    count = count or default_count(sample)
    if supplied is not None:
        sample.layout.check_conformable(supplied.layout)
        basis = supplied.truncate(count)
    elif kind == "fourier":
        basis = fourier_system(sample.layout, count)
    else:
        basis = empirical_eigensystem(sample, count)
    if basis.count == 0:
        raise DegenerateDataError(f"the {side} sample has no variation")
    return basis


def run_test(x: Sample, y: Sample, config: TestConfig | None = None) -> TestResult:
    """
    Test H0: β = 0 with the bootstrap max/min statistics of the cross scores.

    Raises:
        DomainError: when the samples have different sizes or n < 3.
        DegenerateDataError: when the data have no usable variation.
    """
    config = config or TestConfig()
    if x.n != y.n:
        raise DomainError(f"x and y have different sizes: {x.n} vs {y.n}")
    if x.n < 3:
        raise DomainError(f"need at least 3 observations, got {x.n}")
    n = x.n

    order = canonical_order(x, y)
    x_centered = center(x.take(order))
    y_centered = center(y.take(order))

    phi = resolve_basis(x_centered, config.p1, config.x_basis, config.basis, "predictor")
    psi = resolve_basis(y_centered, config.p2, config.y_basis, config.basis, "response")
    cs = cross_scores(project_scores(x_centered, phi), project_scores(y_centered, psi))
    summary = summarize(cs)
    logger.debug(f"n={n}, p1={phi.count}, p2={psi.count}, p={cs.p}")

    tau = tauselect.select_tau(summary, n, config.tau, config.significance, config.seed)
    t_u, t_l = max_min_statistics(summary, tau, n)
    quantiles = bootstrap_quantiles(summary, tau, config.b, config.significance, config.seed)
    decision = decide(t_u, t_l, quantiles, config.significance)
    sci = simultaneous_intervals(summary, tau, quantiles, n)
    return TestResult(
        t_u=t_u,
        t_l=t_l,
        quantiles=quantiles,
        tau=tau,
        reject=decision.reject,
        p_value=decision.p_value,
        sci=sci,
        significance=config.significance,
        p1=phi.count,
        p2=psi.count,
        seed=config.seed,
        summary=summary,
    )
