from omegabounds.sieve.core import (
    DEFAULT_SEGMENT_SIZE,
    CoverageError,
    MemoryBudgetError,
    OmegaBlock,
    PrefixState,
    PrimeTable,
    SieveError,
    factor_count_naive,
    iter_blocks,
    j_diff,
    omega_block,
    prefix_scan,
    prime_count,
    prime_count_many,
    primes_up_to,
)
from omegabounds.sieve.dump import PrefixStateWriter, read_states
