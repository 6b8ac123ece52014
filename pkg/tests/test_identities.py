import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegabounds.identities import IdentityError, convolution_omega, hyperbola_check, hyperbola_rhs
from omegabounds.sieve import CoverageError, factor_count_naive, iter_blocks, prefix_scan, primes_up_to


def test_hyperbola_worked_example():
    split = hyperbola_rhs(100, 10)
    assert (split.term_prime_sum, split.term_pi_sum, split.term_correction) == (117, 94, 40)
    assert split.total == 171 == prefix_scan(100).sum_omega


def test_hyperbola_boundary():
    assert hyperbola_rhs(2, 2).total == 1
    assert hyperbola_rhs(1, 1).total == 0


def test_hyperbola_rejects_bad_split():
    with pytest.raises(IdentityError):
        hyperbola_rhs(10, 11)
    with pytest.raises(IdentityError):
        hyperbola_rhs(10, 0)
    with pytest.raises(CoverageError):
        hyperbola_rhs(1000, 10, primes_up_to(100))


@given(st.integers(2, 3000), st.data())
@settings(max_examples=40, deadline=None)
def test_hyperbola_total_is_independent_of_y(x, data):
    y1 = data.draw(st.integers(1, x))
    y2 = data.draw(st.integers(1, x))
    table = primes_up_to(x)
    assert hyperbola_rhs(x, y1, table).total == hyperbola_rhs(x, y2, table).total == prefix_scan(x).sum_omega


def test_hyperbola_check_at_1e6(table_1e6):
    split, sieve_sum, verdict = hyperbola_check(10**6, 1000, table_1e6)
    assert verdict == "EXACT-MATCH"
    assert split.total == sieve_sum


@pytest.mark.slow
def test_hyperbola_random_pairs_to_1e7(rng):
    limit = 10**7
    table = primes_up_to(limit)
    omega = np.concatenate([block.omega for block in iter_blocks(1, limit + 1, table=table)])
    prefix = np.concatenate([[0], np.cumsum(omega, dtype=np.int64)])
    for _ in range(500):
        x = int(rng.integers(2, limit + 1))
        y = int(rng.integers(2, x + 1))
        assert hyperbola_rhs(x, y, table).total == int(prefix[x])


@pytest.mark.parametrize("n, expected", [(1, 0), (12, 2), (9699690, 8)])
def test_convolution_omega_examples(n, expected):
    assert convolution_omega(n) == expected


def test_convolution_omega_matches_naive():
    for n in range(1, 10**4 + 1):
        assert convolution_omega(n) == factor_count_naive(n)[0]


def test_convolution_omega_rejects_zero():
    with pytest.raises(IdentityError):
        convolution_omega(0)
