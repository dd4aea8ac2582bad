import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from flm_maxtest.errors import DomainError
from flm_maxtest.fpca.eigen import OrthonormalBasis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlignmentReport:
    """
    Alignment of two pairs of bases.

    Attributes:
        u_x: p1 x p1 matrix of inner products between the predictor bases.
        u_y: p2 x p2 matrix of inner products between the response bases.
        w_max_dev: max-norm deviation of the Kronecker product of u_x and u_y
        from the identity.
    """

    u_x: NDArray[np.float64]
    u_y: NDArray[np.float64]
    w_max_dev: float


def cross_gram(a: OrthonormalBasis, b: OrthonormalBasis) -> NDArray[np.float64]:
    """Entry (j, k) is the inner product of a_j and b_k."""
    a.layout.check_conformable(b.layout)
    return (a.vectors * a.layout.weights) @ b.vectors.T


def kronecker_max_deviation(u_x: NDArray[np.float64], u_y: NDArray[np.float64]) -> float:
    """
    ‖U_X ⊗ U_Y − I‖_∞ without forming the p1·p2 x p1·p2 product.

    Off-diagonal entries of the product are either an off-diagonal entry of
    U_X times any entry of U_Y, or a diagonal entry of U_X times an
    off-diagonal entry of U_Y.
    """
    dx = np.diag(u_x)
    dy = np.diag(u_y)
    deviation = float(np.max(np.abs(np.outer(dx, dy) - 1.0)))

    off_x = u_x - np.diag(dx)
    off_y = u_y - np.diag(dy)
    if off_x.size > 1:
        deviation = max(deviation, float(np.max(np.abs(off_x)) * np.max(np.abs(u_y))))
    if off_y.size > 1:
        deviation = max(deviation, float(np.max(np.abs(dx)) * np.max(np.abs(off_y))))
    return deviation


def alignment_report(
    basis_a: tuple[OrthonormalBasis, OrthonormalBasis],
    basis_b: tuple[OrthonormalBasis, OrthonormalBasis],
) -> AlignmentReport:
    """
    Compare two (predictor basis, response basis) pairs, typically the
    empirical eigensystems against the population ones.

    Raises:
        DomainError: when the paired systems retain different counts.
    """
    (phi, psi), (phi_tilde, psi_tilde) = basis_a, basis_b
    if phi.count != phi_tilde.count or psi.count != psi_tilde.count:
        raise DomainError(
            "paired bases must retain the same counts: "
            f"p1 {phi.count} vs {phi_tilde.count}, p2 {psi.count} vs {psi_tilde.count}"
        )
    if phi.count == 0 or psi.count == 0:
        raise DomainError("cannot align empty bases")
    u_x = cross_gram(phi, phi_tilde)
    u_y = cross_gram(psi, psi_tilde)
    w_max_dev = kronecker_max_deviation(u_x, u_y)
    logger.debug(f"alignment: p1={phi.count}, p2={psi.count}, max deviation={w_max_dev:.3e}")
    return AlignmentReport(u_x=u_x, u_y=u_y, w_max_dev=w_max_dev)
