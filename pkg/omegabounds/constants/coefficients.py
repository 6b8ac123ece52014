"""
The coefficients a_j of the expansion of the average of ω in powers of 1/log x.

Two independent routes are provided and are expected to agree:

* `a_coeff_integral`: a_j = -∫_1^∞ {t} log^(j-1)(t) / t^2 dt, integrated
  exactly on unit intervals and closed with an Euler–Maclaurin tail.
* `a_coeff_derivative`: a_j = (-1)^(j-1)/j · g^(j)(1) with
  g(s) = (s - 1) ζ(s) / s, by high-precision numerical differentiation.
"""

import math

import mpmath

from omegabounds.constants.bigreal import (
    BigReal,
    ConstantError,
    PrecisionShortfallError,
    check_digits,
)
from omegabounds.constants.euler_maclaurin import fractional_part_tail
from omegabounds.envelopes import antideriv_logpow

INTEGRAL_MAX_J: int = 10
DERIVATIVE_MAX_J: int = 6
UNIT_INTERVALS: int = 64
GUARD_DIGITS: int = 15


def tail_cut(k: int) -> int:
    """First unit interval handed to the Euler–Maclaurin tail, past e^(k/2) where log^k t / t^2 peaks."""
    return max(UNIT_INTERVALS, math.ceil(math.exp(k / 2)) + 1)


def _unit_interval(k: int, n: int) -> mpmath.mpf:
    # ∫_n^{n+1} (t - n) log^k t / t^2 dt = [log^(k+1) t / (k+1)] - n [A_k(t)]
    a, b = mpmath.mpf(n), mpmath.mpf(n + 1)
    first = (mpmath.log(b) ** (k + 1) - mpmath.log(a) ** (k + 1)) / (k + 1)
    second = n * (antideriv_logpow(k, b) - antideriv_logpow(k, a))
    return first - second


def a_coeff_integral(j: int, digits: int) -> BigReal:
    """
    a_j from the fractional-part integral.

    Args:
        j (int): Index, 1 <= j <= 10.
        digits (int): Requested accuracy.

    Returns:
        BigReal: a_j with an error bound below 10^(-digits).

    Raises:
        ConstantError: If j is outside [1, 10].
    """
    if not 1 <= j <= INTEGRAL_MAX_J:
        raise ConstantError(f"a_j is defined here for 1 <= j <= {INTEGRAL_MAX_J}, got j={j}")
    check_digits(digits)
    k = j - 1
    wd = digits + GUARD_DIGITS
    with mpmath.workdps(wd + 10):
        eps = mpmath.mpf(10) ** (-wd)
        cut = tail_cut(k)
        body = mpmath.fsum(_unit_interval(k, n) for n in range(1, cut))
        tail, remainder = fractional_part_tail(k, cut, eps)
        value = -(body + tail)
        rounding = mpmath.mpf(10) ** (-wd + 5)
        return BigReal(value, wd, remainder + rounding)


def _g(s: mpmath.mpf) -> mpmath.mpf:
    if s == 1:
        return mpmath.mpf(1)
    return (s - 1) * mpmath.zeta(s) / s


def _derivative_at_one(j: int, dps: int) -> mpmath.mpf:
    with mpmath.workdps(dps):
        return (-1) ** (j - 1) * mpmath.diff(_g, mpmath.mpf(1), j) / j


def a_coeff_derivative(j: int, digits: int) -> BigReal:
    """
    a_j from the derivatives of (s - 1) ζ(s) / s at s = 1.

    mpmath's central-difference stencil is run at 3·digits working digits and
    again with 10 extra; the difference of the two runs is the reported error.

    Args:
        j (int): Index, 1 <= j <= 6.
        digits (int): Requested accuracy.

    Returns:
        BigReal: a_j.

    Raises:
        ConstantError: If j is outside [1, 6].
        PrecisionShortfallError: If the two runs disagree by more than 10^(-digits).
    """
    if not 1 <= j <= DERIVATIVE_MAX_J:
        raise ConstantError(f"The derivative route supports 1 <= j <= {DERIVATIVE_MAX_J}, got j={j}")
    check_digits(digits)
    wd = 3 * digits
    coarse = _derivative_at_one(j, wd)
    fine = _derivative_at_one(j, wd + 10)
    with mpmath.workdps(wd + 10):
        error = abs(fine - coarse) + mpmath.mpf(10) ** (-wd)
        if error > mpmath.mpf(10) ** (-digits):
            raise PrecisionShortfallError(
                f"a_{j} by differentiation reached only {mpmath.nstr(error, 3)}, wanted 1e-{digits}"
            )
        return BigReal(fine, wd, error)
