import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Tuple

import numpy as np
import tqdm

DEFAULT_SEGMENT_SIZE: int = 2**20
PRIME_LIMIT_BUDGET: int = 2 * 10**9
COUNT_INDEX_STRIDE: int = 2**16


class SieveError(ValueError):
    """Raised when a sieve operation is called outside its preconditions."""


class CoverageError(SieveError):
    """Raised when a PrimeTable does not reach the square root of a segment end."""


class MemoryBudgetError(SieveError):
    """Raised when a prime table would exceed the configured limit."""


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """
    The primes in [2, limit] together with sampled cumulative counts.

    The table is immutable after construction and can be shared across worker
    processes. `count_index[i]` holds π(i * COUNT_INDEX_STRIDE) and narrows the
    binary search behind every π query.

    Attributes:
        limit (int): Largest integer covered by the table.
        primes (np.ndarray): Strictly ascending int64 array of all primes <= limit.
        count_index (Optional[np.ndarray]): Sampled values of π on a regular grid.
    """

    limit: int
    primes: np.ndarray = field(repr=False)
    count_index: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return int(self.primes.shape[0])

    def count(self, x: int) -> int:
        return prime_count(x, self)


@dataclass(frozen=True, eq=False)
class OmegaBlock:
    """
    ω(k) and Ω(k) for every k in the half-open segment [lo, hi).

    Attributes:
        lo (int): First integer of the segment (inclusive, >= 1).
        hi (int): End of the segment (exclusive).
        omega (np.ndarray): uint8 counts of distinct prime divisors.
        big_omega (np.ndarray): uint8 counts of prime divisors with multiplicity.
    """

    lo: int
    hi: int
    omega: np.ndarray = field(repr=False)
    big_omega: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = self.hi - self.lo
        assert self.omega.shape == (n,), f"omega has shape {self.omega.shape}, expected ({n},)"
        assert self.big_omega.shape == (n,), f"big_omega has shape {self.big_omega.shape}"

    def __len__(self) -> int:
        return self.hi - self.lo

    def at(self, k: int) -> Tuple[int, int]:
        """Return (ω(k), Ω(k)) for an integer k inside the block."""
        i = k - self.lo
        return int(self.omega[i]), int(self.big_omega[i])


@dataclass(frozen=True)
class PrefixState:
    """
    Exact running sums Σ_{k<=n} ω(k) and Σ_{k<=n} Ω(k).

    Sums are Python integers, so they never overflow.
    """

    n: int
    sum_omega: int
    sum_big_omega: int

    def advance(self, block: OmegaBlock) -> "PrefixState":
        """Fold a block that starts right after `n` into the running sums."""
        assert block.lo == self.n + 1, f"Block starts at {block.lo}, state is at {self.n}"
        return PrefixState(
            n=block.hi - 1,
            sum_omega=self.sum_omega + int(block.omega.sum(dtype=np.int64)),
            sum_big_omega=self.sum_big_omega + int(block.big_omega.sum(dtype=np.int64)),
        )


def _simple_sieve(n: int) -> np.ndarray:
    """All primes <= n by a plain Eratosthenes sieve (n is at most a few million)."""
    if n < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _segment_primes(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi) given all base primes <= sqrt(hi - 1)."""
    mask = np.ones(hi - lo, dtype=bool)
    for p in base.tolist():
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        mask[start - lo :: p] = False
    if lo < 2:
        mask[: 2 - lo] = False
    return lo + np.flatnonzero(mask).astype(np.int64)


def primes_up_to(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    budget: int = PRIME_LIMIT_BUDGET,
    progress_bar: bool = False,
) -> PrimeTable:
    """
    Build the PrimeTable of all primes in [2, limit] with a segmented sieve.

    Args:
        limit (int): Largest integer to cover; must be at least 2.
        segment_size (int): Integers sieved per segment.
        budget (int): Largest admissible limit; guards memory use.
        progress_bar (bool): Whether to show a tqdm bar over segments.

    Returns:
        PrimeTable: The table, with a sampled count index.

    Raises:
        SieveError: If limit < 2.
        MemoryBudgetError: If limit exceeds the budget.
    """
    if limit < 2:
        raise SieveError(f"Prime table limit must be >= 2, got {limit}")
    if limit > budget:
        raise MemoryBudgetError(f"Prime table limit {limit} exceeds budget {budget}")

    base = _simple_sieve(math.isqrt(limit))
    chunks = []
    starts = range(0, limit + 1, segment_size)
    for lo in tqdm.tqdm(starts, desc="Sieving primes", disable=not progress_bar):
        hi = min(lo + segment_size, limit + 1)
        chunks.append(_segment_primes(lo, hi, base))
    primes = np.concatenate(chunks)

    grid = np.arange(0, limit + 1, COUNT_INDEX_STRIDE, dtype=np.int64)
    count_index = np.searchsorted(primes, grid, side="right").astype(np.int64)
    return PrimeTable(limit=limit, primes=primes, count_index=count_index)


def prime_count(x: int, table: PrimeTable) -> int:
    """
    Exact π(x) for x <= table.limit.

    Args:
        x (int): The argument.
        table (PrimeTable): A table covering x.

    Returns:
        int: The number of primes <= x.

    Raises:
        CoverageError: If x exceeds the table limit.
    """
    if x > table.limit:
        raise CoverageError(f"π({x}) requested from a table up to {table.limit}")
    if x < 2:
        return 0
    if table.count_index is None:
        return int(np.searchsorted(table.primes, x, side="right"))
    i = x // COUNT_INDEX_STRIDE
    left = int(table.count_index[i])
    right = int(table.count_index[i + 1]) if i + 1 < len(table.count_index) else len(table)
    return left + int(np.searchsorted(table.primes[left:right], x, side="right"))


def prime_count_many(xs: np.ndarray, table: PrimeTable) -> np.ndarray:
    """Vectorized π over an integer array whose entries are all <= table.limit."""
    if xs.size and int(xs.max()) > table.limit:
        raise CoverageError(f"π({int(xs.max())}) requested from a table up to {table.limit}")
    return np.searchsorted(table.primes, xs, side="right").astype(np.int64)


def omega_block(lo: int, hi: int, table: PrimeTable) -> OmegaBlock:
    """
    Compute ω and Ω on [lo, hi) by sieving with every prime p <= sqrt(hi - 1).

    Each p marks its multiples once for ω and once per power p^l for Ω while
    dividing the power out of a running cofactor. A cofactor left above 1 is a
    single prime larger than sqrt(hi - 1) and adds 1 to both counts.

    Args:
        lo (int): First integer (inclusive, >= 1).
        hi (int): End of the segment (exclusive, > lo).
        table (PrimeTable): Must cover sqrt(hi - 1).

    Returns:
        OmegaBlock: Per-integer counts for the segment.

    Raises:
        SieveError: If lo = 0 or the segment is empty.
        CoverageError: If the table is too short for the segment.
    """
    if lo < 1:
        raise SieveError("ω and Ω are defined for positive integers; lo must be >= 1")
    if hi <= lo:
        raise SieveError(f"Empty segment [{lo}, {hi})")
    root = math.isqrt(hi - 1)
    if table.limit < root:
        raise CoverageError(f"Segment end {hi - 1} needs primes up to {root}, table stops at {table.limit}")

    n = hi - lo
    cofactor = np.arange(lo, hi, dtype=np.uint64)
    omega = np.zeros(n, dtype=np.uint8)
    big_omega = np.zeros(n, dtype=np.uint8)

    num_base = int(np.searchsorted(table.primes, root, side="right"))
    for p in table.primes[:num_base].tolist():
        start = -lo % p
        if start >= n:
            continue
        omega[start::p] += 1
        p_u = np.uint64(p)
        pk = p
        while True:
            s = -lo % pk
            if s >= n:
                break
            big_omega[s::pk] += 1
            cofactor[s::pk] //= p_u
            if pk > (hi - 1) // p:
                break
            pk *= p

    rest = cofactor > 1
    omega[rest] += 1
    big_omega[rest] += 1
    return OmegaBlock(lo=lo, hi=hi, omega=omega, big_omega=big_omega)


def factor_count_naive(n: int) -> Tuple[int, int]:
    """
    (ω(n), Ω(n)) by trial division with 2 and then the odd numbers up to sqrt(n).

    Raises:
        SieveError: If n = 0.
    """
    if n < 1:
        raise SieveError("factor_count_naive requires n >= 1")
    omega = big_omega = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            omega += 1
            while n % d == 0:
                n //= d
                big_omega += 1
        d = 3 if d == 2 else d + 2
    if n > 1:
        omega += 1
        big_omega += 1
    return omega, big_omega


def iter_blocks(
    lo: int,
    hi: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    table: Optional[PrimeTable] = None,
    progress_bar: bool = False,
) -> Iterator[OmegaBlock]:
    """
    Yield consecutive OmegaBlocks covering [lo, hi) in ascending order.

    Args:
        lo (int): First integer (>= 1).
        hi (int): End of the range (exclusive).
        segment_size (int): Integers per block.
        table (Optional[PrimeTable]): Reused when given, otherwise built to cover sqrt(hi - 1).
        progress_bar (bool): Whether to show a tqdm bar over blocks.
    """
    if segment_size < 1:
        raise SieveError(f"Segment size must be positive, got {segment_size}")
    if table is None:
        table = primes_up_to(max(2, math.isqrt(hi - 1)))
    starts = range(lo, hi, segment_size)
    for start in tqdm.tqdm(starts, desc="Sieving ω/Ω", disable=not progress_bar):
        yield omega_block(start, min(start + segment_size, hi), table)


def prefix_scan(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    sink: Optional[Callable[[PrefixState], None]] = None,
    per_integer: bool = False,
    table: Optional[PrimeTable] = None,
    progress_bar: bool = False,
) -> PrefixState:
    """
    Exact Σ_{k<=x} ω(k) and Σ_{k<=x} Ω(k) by streaming segments.

    Args:
        x (int): Upper end of the sums.
        segment_size (int): Integers per segment; the result does not depend on it.
        sink (Optional[Callable[[PrefixState], None]]): Receives the running state
            after every segment boundary, or after every integer if `per_integer`.
        per_integer (bool): Emit to the sink after each integer instead of each segment.
        table (Optional[PrimeTable]): Reused prime table covering sqrt(x).
        progress_bar (bool): Whether to show a tqdm bar over segments.

    Returns:
        PrefixState: The state at n = x.
    """
    state = PrefixState(n=0, sum_omega=0, sum_big_omega=0)
    if x < 1:
        return state
    for block in iter_blocks(1, x + 1, segment_size, table, progress_bar):
        if sink is not None and per_integer:
            so = np.cumsum(block.omega, dtype=np.int64)
            sb = np.cumsum(block.big_omega, dtype=np.int64)
            for i in range(len(block)):
                sink(PrefixState(block.lo + i, state.sum_omega + int(so[i]), state.sum_big_omega + int(sb[i])))
        state = state.advance(block)
        if sink is not None and not per_integer:
            sink(state)
    return state


def j_diff(state: PrefixState) -> int:
    """𝓙(n) = Σ_{k<=n} (Ω(k) - ω(k)) for the state's n."""
    return state.sum_big_omega - state.sum_omega
