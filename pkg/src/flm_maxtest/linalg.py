import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from flm_maxtest.constants import PSD_TOLERANCE_RATIO
from flm_maxtest.errors import NumericalError


def psd_factor(matrix: NDArray[np.float64]) -> NDArray[np.float64]:
    """
    Square-root factor F with F Fᵀ = matrix, from a symmetric
    eigendecomposition with negative eigenvalues clipped at 0.

    Raises:
        NumericalError: when the smallest eigenvalue is below
        -1e-10 times the largest.
    """
    if matrix.size == 0:
        return np.zeros((0, 0))
    eigenvalues, eigenvectors = scipy.linalg.eigh((matrix + matrix.T) / 2)
    largest = max(float(eigenvalues[-1]), 0.0)
    if eigenvalues[0] < -PSD_TOLERANCE_RATIO * largest:
        raise NumericalError(
            f"matrix is not positive semi-definite: eigenvalues in "
            f"[{eigenvalues[0]:.3e}, {eigenvalues[-1]:.3e}]"
        )
    return eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))
