"""Special functions used by the chance constraints."""
from typing import Tuple, Union

import numpy as np
from scipy import special

ArrayLike = Union[float, np.ndarray]


def regularized_gamma(a: ArrayLike, x: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Lower and upper regularized incomplete gamma, P(a, x) and Q(a, x)."""
    a_arr = np.asarray(a, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(a_arr <= 0):
        raise ValueError("Gamma shape a must be positive")
    if np.any(x_arr < 0):
        raise ValueError("Gamma argument x must be non-negative")
    return special.gammainc(a, x), special.gammaincc(a, x)


def normal_cdf(z: ArrayLike) -> ArrayLike:
    """Standard normal CDF Φ."""
    return special.ndtr(z)


def normal_quantile(q: ArrayLike) -> ArrayLike:
    """Inverse of Φ on (0, 1)."""
    q_arr = np.asarray(q, dtype=float)
    if np.any((q_arr <= 0) | (q_arr >= 1)):
        raise ValueError("Quantile level must lie strictly between 0 and 1")
    return special.ndtri(q)
