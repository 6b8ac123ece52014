import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import mpmath
import numpy as np
import sympy

from omegabounds.constants.bigreal import (
    BigReal,
    ConstantError,
    PrecisionError,
    PrecisionShortfallError,
    check_digits,
)
from omegabounds.constants.coefficients import a_coeff_integral
from omegabounds.constants.euler_maclaurin import harmonic_gamma, power_tail
from omegabounds.sieve import primes_up_to

GUARD_DIGITS: int = 10
MERTENS_MAX_DIGITS: int = 60
DIRECT_MAX_DIGITS: int = 15
DIRECT_PRIME_CAP: int = 10**8


def euler_gamma(digits: int) -> BigReal:
    """
    Euler's constant γ from the harmonic series.

    Args:
        digits (int): Requested accuracy; the returned bound is below 10^(-digits).

    Returns:
        BigReal: γ.

    Raises:
        PrecisionError: If `digits` is outside the supported range.
    """
    check_digits(digits)
    wd = digits + GUARD_DIGITS
    with mpmath.workdps(wd + 5):
        eps = mpmath.mpf(10) ** (-wd)
        value, remainder = harmonic_gamma(wd, eps)
        return BigReal(+value, wd, remainder + eps)


def zeta_int(k: int, digits: int) -> BigReal:
    """
    ζ(k) for an integer k >= 2.

    The first N - 1 terms are summed directly; the tail from N on is the
    integral N^(1-k)/(k-1) plus Euler–Maclaurin corrections.

    Raises:
        ConstantError: If k < 2.
        PrecisionError: If `digits` is outside the supported range.
    """
    if k < 2:
        raise ConstantError(f"ζ(k) needs k >= 2, got k={k}")
    check_digits(digits)
    wd = digits + GUARD_DIGITS
    n = max(4, wd)
    with mpmath.workdps(wd + 5):
        eps = mpmath.mpf(10) ** (-wd)
        head = mpmath.fsum(mpmath.mpf(m) ** (-k) for m in range(1, n))
        tail, remainder = power_tail(k, n, eps)
        return BigReal(head + tail, wd, remainder + eps)


def mobius(k: int) -> int:
    factors = sympy.factorint(k)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def totient(k: int) -> int:
    result = k
    for p in sympy.factorint(k):
        result = result // p * (p - 1)
    return result


def _series_cutoff(digits: int) -> int:
    # log ζ(k) <= ζ(k) - 1 <= 3·2^(-k), so the tail past K is at most 3·2^(-K)
    target = mpmath.mpf(10) ** (-digits - 3)
    k = 2
    while 3 * mpmath.mpf(2) ** (-k) >= target:
        k += 1
    return k


def _log_zeta_series(digits: int, weight: Callable[[int], int]) -> BigReal:
    """γ + Σ_{k>=2} weight(k) log ζ(k) / k with |weight(k)| <= k."""
    if digits > MERTENS_MAX_DIGITS:
        raise PrecisionError(f"The log ζ series is supported up to {MERTENS_MAX_DIGITS} digits")
    check_digits(digits)
    wd = digits + GUARD_DIGITS
    gamma = euler_gamma(wd)
    cutoff = _series_cutoff(digits)
    with mpmath.workdps(wd + 5):
        terms: List[mpmath.mpf] = []
        error = gamma.error_bound
        for k in range(2, cutoff + 1):
            w = weight(k)
            if w == 0:
                continue
            zeta = zeta_int(k, wd)
            terms.append(w * mpmath.log(zeta.value) / k)
            error += abs(mpmath.mpf(w) / k) * zeta.error_bound
        tail = 3 * mpmath.mpf(2) ** (-cutoff)
        value = gamma.value + mpmath.fsum(terms)
        return BigReal(value, wd, error + tail + mpmath.mpf(10) ** (-wd))


def meissel_mertens(digits: int) -> BigReal:
    """
    The Meissel–Mertens constant M = γ + Σ_{k>=2} μ(k) log ζ(k) / k.

    Raises:
        PrecisionError: If `digits` exceeds 60.
    """
    return _log_zeta_series(digits, mobius)


def m_prime(digits: int) -> BigReal:
    """
    M' = γ + Σ_{k>=2} φ(k) log ζ(k) / k, the constant in the average of Ω.

    Raises:
        PrecisionError: If `digits` exceeds 60.
    """
    return _log_zeta_series(digits, totient)


def m_double_prime(digits: int) -> BigReal:
    """M'' = M' - M by the series route."""
    return m_prime(digits) - meissel_mertens(digits)


def m_double_prime_direct(
    digits: int, prime_limit: Optional[int] = None, progress_bar: bool = False
) -> BigReal:
    """
    M'' = Σ_p 1/(p(p-1)) summed directly over sieved primes.

    The primes above P contribute at most Σ_{n>P} 1/(n(n-1)) = 1/P, so the
    partial sum S brackets M'' in [S, S + 1/P]. The midpoint is returned.

    Args:
        digits (int): Requested digits; P defaults to 10^digits, capped at 10^8.
        prime_limit (Optional[int]): Override for P.
        progress_bar (bool): Whether to show sieve progress.

    Returns:
        BigReal: M'' with the tail folded into the error bound; its working
        digits are the decimals that bound actually certifies.

    Raises:
        PrecisionError: If `digits` exceeds 15.
        PrecisionShortfallError: If the capped default P cannot reach 10^(-digits).
    """
    if digits > DIRECT_MAX_DIGITS:
        raise PrecisionError(f"The direct prime sum is supported up to {DIRECT_MAX_DIGITS} digits")
    check_digits(digits)
    limit = prime_limit if prime_limit is not None else min(10**digits, DIRECT_PRIME_CAP)
    if prime_limit is None and 2 * limit < 10**digits:
        raise PrecisionShortfallError(
            f"The tail 1/(2P) with P = {limit} exceeds 1e-{digits}; pass prime_limit to accept it"
        )
    table = primes_up_to(max(limit, 2), progress_bar=progress_bar)
    p = table.primes.astype(np.float64)
    partial = math.fsum((1.0 / (p * (p - 1.0))).tolist())

    with mpmath.workdps(30):
        half_tail = mpmath.mpf(1) / (2 * table.limit)
        rounding = mpmath.mpf(len(p) + 1) * mpmath.mpf(2) ** -52 * mpmath.mpf(partial)
        error = half_tail + rounding
        if prime_limit is None and error > mpmath.mpf(10) ** (-digits):
            raise PrecisionShortfallError(
                f"Primes up to {table.limit} bound M'' only to {mpmath.nstr(error, 3)}, wanted 1e-{digits}"
            )
        certified = max(1, int(mpmath.floor(-mpmath.log10(error))))
        return BigReal(mpmath.mpf(partial) + half_tail, certified, error)


def alpha0(digits: int) -> BigReal:
    """α₀ = 45/32 - log log 32, attained at n = 32."""
    return _witness_constant(45, 32, digits)


def beta0(digits: int) -> BigReal:
    """β₀ = 1/2 - log log 2, attained at n = 2."""
    return _witness_constant(1, 2, digits)


def alpha1(digits: int) -> BigReal:
    """α₁ = 8/7 - log log 7, attained at n = 7."""
    return _witness_constant(8, 7, digits)


def _witness_constant(total: int, n: int, digits: int) -> BigReal:
    wd = digits + GUARD_DIGITS
    with mpmath.workdps(wd + 5):
        value = mpmath.mpf(total) / n - mpmath.log(mpmath.log(n))
    return BigReal.exact_to(value, wd)


@dataclass(frozen=True)
class ConstantSet:
    """
    Every constant the verifier consumes, at one precision.

    Attributes:
        digits (int): Requested precision.
        gamma (BigReal): Euler's constant.
        M (BigReal): Meissel–Mertens constant.
        M_prime (BigReal): M + M''.
        M_double_prime (BigReal): Σ_p 1/(p(p-1)), series route.
        a (List[BigReal]): a_1, ..., a_{m_max}.
        alpha0, beta0, alpha1, beta1 (BigReal): Best constants of the global bounds.
    """

    digits: int
    gamma: BigReal
    M: BigReal
    M_prime: BigReal
    M_double_prime: BigReal
    a: List[BigReal] = field(default_factory=list)
    alpha0: Optional[BigReal] = None
    beta0: Optional[BigReal] = None
    alpha1: Optional[BigReal] = None
    beta1: Optional[BigReal] = None

    def __post_init__(self) -> None:
        assert (self.M + self.M_double_prime).agrees_with(self.M_prime), "M' must equal M + M''"

    def named(self) -> Dict[str, BigReal]:
        values = {
            "gamma": self.gamma,
            "M": self.M,
            "M_prime": self.M_prime,
            "M_double_prime": self.M_double_prime,
            "alpha0": self.alpha0,
            "beta0": self.beta0,
            "alpha1": self.alpha1,
            "beta1": self.beta1,
        }
        values.update({f"a{j}": a_j for j, a_j in enumerate(self.a, start=1)})
        return {name: value for name, value in values.items() if value is not None}

    def to_json(self) -> List[Dict[str, str]]:
        return [value.to_json(name, self.digits) for name, value in self.named().items()]


def constant_set(digits: int = 30, m_max: int = 3) -> ConstantSet:
    """
    Compute γ, M, M', M'', a_1..a_{m_max} and the best bound constants.

    Args:
        digits (int): Requested precision. Defaults to 30.
        m_max (int): Number of a_j coefficients. Defaults to 3.

    Returns:
        ConstantSet: The constants, each with its own error bound.
    """
    if digits > MERTENS_MAX_DIGITS:
        raise PrecisionError(f"Constant sets are supported up to {MERTENS_MAX_DIGITS} digits")
    M = meissel_mertens(digits)
    M_prime = m_prime(digits)
    return ConstantSet(
        digits=digits,
        gamma=euler_gamma(digits),
        M=M,
        M_prime=M_prime,
        M_double_prime=M_prime - M,
        a=[a_coeff_integral(j, digits) for j in range(1, m_max + 1)],
        alpha0=alpha0(digits),
        beta0=beta0(digits),
        alpha1=alpha1(digits),
        beta1=M_prime,
    )
