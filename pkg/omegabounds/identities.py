from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np
import sympy

from omegabounds.sieve import (
    CoverageError,
    PrimeTable,
    prefix_scan,
    prime_count,
    prime_count_many,
    primes_up_to,
)


class IdentityError(ValueError):
    """Raised when an identity is evaluated outside its parameter window."""


@dataclass(frozen=True)
class HyperbolaSplit:
    """
    The three terms of the hyperbola identity for Σ_{n<=x} ω(n).

    Attributes:
        x (int): Upper end of the sum.
        y (int): Split point, 1 <= y <= x.
        term_prime_sum (int): Σ_{p<=y} floor(x/p).
        term_pi_sum (int): Σ_{n<=x/y} π(x/n).
        term_correction (int): floor(x/y) * π(y).
    """

    x: int
    y: int
    term_prime_sum: int
    term_pi_sum: int
    term_correction: int

    @property
    def total(self) -> int:
        return self.term_prime_sum + self.term_pi_sum - self.term_correction


def hyperbola_rhs(x: int, y: int, table: Optional[PrimeTable] = None) -> HyperbolaSplit:
    """
    Evaluate the right-hand side of the hyperbola identity exactly.

    π(x/n) is answered by binary search in the table's prime list, so the table
    must cover x. Only floor(x/y) such queries are needed.

    Args:
        x (int): Upper end of the sum.
        y (int): Split point with 1 <= y <= x.
        table (Optional[PrimeTable]): Table covering x; built on demand if omitted.

    Returns:
        HyperbolaSplit: The three integer terms.

    Raises:
        IdentityError: If y = 0 or y > x.
        CoverageError: If the supplied table stops below x.
    """
    if y < 1 or y > x:
        raise IdentityError(f"Hyperbola split needs 1 <= y <= x, got x={x}, y={y}")
    if table is None:
        table = primes_up_to(max(2, x))
    if table.limit < x:
        raise CoverageError(f"Hyperbola split at x={x} needs π up to x, table stops at {table.limit}")

    small_primes = table.primes[: prime_count(y, table)]
    term_prime_sum = int(np.sum(x // small_primes, dtype=np.int64))

    q = x // y
    quotients = x // np.arange(1, q + 1, dtype=np.int64)
    term_pi_sum = int(np.sum(prime_count_many(quotients, table), dtype=np.int64))

    term_correction = q * prime_count(y, table)
    return HyperbolaSplit(
        x=x,
        y=y,
        term_prime_sum=term_prime_sum,
        term_pi_sum=term_pi_sum,
        term_correction=term_correction,
    )


def hyperbola_check(
    x: int, y: int, table: Optional[PrimeTable] = None
) -> Tuple[HyperbolaSplit, int, Literal["EXACT-MATCH", "MISMATCH"]]:
    """
    Compare the hyperbola identity against the sieve's Σ_{n<=x} ω(n).

    Returns:
        Tuple[HyperbolaSplit, int, str]: The split, the sieve sum and the verdict.
    """
    split = hyperbola_rhs(x, y, table)
    sieve_sum = prefix_scan(x, table=table).sum_omega
    verdict = "EXACT-MATCH" if split.total == sieve_sum else "MISMATCH"
    return split, sieve_sum, verdict


def convolution_omega(n: int) -> int:
    """
    ω(n) as the Dirichlet convolution (1 * ϖ)(n) = Σ_{d|n} ϖ(d).

    ϖ is the prime indicator, realized by sympy's deterministic primality test
    (exact for every 64-bit input).

    Raises:
        IdentityError: If n = 0.
    """
    if n < 1:
        raise IdentityError("The convolution is defined for n >= 1")
    return sum(1 for d in sympy.divisors(n) if sympy.isprime(d))
