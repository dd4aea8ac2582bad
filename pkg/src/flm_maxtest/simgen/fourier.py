import numpy as np
from numpy.typing import ArrayLike, NDArray


def fourier_basis(j: int, t: ArrayLike) -> NDArray[np.float64] | float:
    """
    Fourier system on [0, 1]: φ_1 ≡ 1, φ_{2k}(t) = √2 cos(2kπt) and
    φ_{2k+1}(t) = √2 sin(2kπt).
    """
    if j < 1:
        raise ValueError(f"Fourier index must be >= 1, got {j}")
    t = np.asarray(t, dtype=np.float64)
    if j == 1:
        values = np.ones_like(t)
    elif j % 2 == 0:
        values = np.sqrt(2.0) * np.cos(2 * (j // 2) * np.pi * t)
    else:
        values = np.sqrt(2.0) * np.sin(2 * (j // 2) * np.pi * t)
    return float(values) if values.ndim == 0 else values


def fourier_matrix(count: int, t: ArrayLike) -> NDArray[np.float64]:
    """
    Evaluate φ_1, ..., φ_count at the points `t`.

    Returns:
        matrix (NDArray): count x len(t), row j-1 holds φ_j.
    """
    t = np.asarray(t, dtype=np.float64)
    return np.vstack([fourier_basis(j, t) for j in range(1, count + 1)]).reshape(
        count, t.size
    )


def max_aliasing_free_index(grid_size: int) -> int:
    """
    Largest Fourier index whose products with lower-index elements are
    integrated exactly by the trapezoid rule on a uniform grid of
    `grid_size` points (frequencies strictly below half the interval count).
    """
    intervals = grid_size - 1
    return 2 * ((intervals - 1) // 2) + 1
