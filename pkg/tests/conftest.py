import pytest

from omegabounds.sieve import PrimeTable, primes_up_to
from omegabounds.utils import configure_backends


@pytest.fixture(scope="session")
def table_1e6() -> PrimeTable:
    return primes_up_to(10**6)


@pytest.fixture
def rng():
    return configure_backends()
