from typing import Optional, Union

import mpmath
import numpy as np

from omegabounds.constants.bigreal import BigReal, ConstantError, check_digits
from omegabounds.utils import Real

DOUBLE_DPS: int = 20
SERIES_MAX_TERMS: int = 400
EULER_GAMMA: float = float(mpmath.euler)


def ei(x: Real, digits: Optional[int] = None) -> Union[float, BigReal]:
    """
    The exponential integral Ei(x) (principal value for x > 0).

    Args:
        x (Real): Argument, nonzero.
        digits (Optional[int]): None for a double result, otherwise the accuracy
            of the returned BigReal.

    Returns:
        Union[float, BigReal]: Ei(x).

    Raises:
        ConstantError: At the pole x = 0.
    """
    if x == 0:
        raise ConstantError("Ei has a logarithmic pole at 0")
    return _evaluate(mpmath.ei, x, digits)


def li(x: Real, digits: Optional[int] = None) -> Union[float, BigReal]:
    """
    The logarithmic integral li(x) = Ei(log x), principal value across t = 1.

    Raises:
        ConstantError: For x <= 0 or at the pole x = 1.
    """
    if x <= 0:
        raise ConstantError(f"li is defined for x > 0, got {x}")
    if x == 1:
        raise ConstantError("li has a logarithmic pole at 1")
    return _evaluate(mpmath.li, x, digits)


def _evaluate(fn, x: Real, digits: Optional[int]) -> Union[float, BigReal]:
    if digits is None:
        with mpmath.workdps(DOUBLE_DPS):
            return float(fn(mpmath.mpf(x)))
    check_digits(digits)
    wd = digits + 10
    with mpmath.workdps(wd + 5):
        return BigReal.exact_to(fn(mpmath.mpf(x)), wd)


def li_array(t: np.ndarray) -> np.ndarray:
    """
    Vectorized double-precision li(t) for t > 1.

    Uses the everywhere-convergent series Ei(x) = γ + log x + Σ_{k>=1} x^k / (k·k!)
    at x = log t. All terms are positive, so there is no cancellation.

    Raises:
        ConstantError: If any t <= 1.
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 1):
        raise ConstantError("li_array needs every t > 1")
    x = np.log(t)
    total = EULER_GAMMA + np.log(x)
    power = np.ones_like(x)
    series = np.zeros_like(x)
    for k in range(1, SERIES_MAX_TERMS):
        power = power * x / k
        term = power / k
        series += term
        if np.all(term <= np.finfo(np.float64).eps * 1e-2 * series):
            break
    return total + series
