import pytest

from primepot.grid import default_grid
from primepot.scattering import build_filter_apparatus
from primepot.sequences import first_lucky, first_primes
from primepot.susy import design_potential


@pytest.fixture(scope="session")
def grid12():
    return default_grid(12.0, 0.005)


@pytest.fixture(scope="session")
def prime10_potential(grid12):
    return design_potential(first_primes(10), grid12)


@pytest.fixture(scope="session")
def prime15_potential(grid12):
    return design_potential(first_primes(15), grid12)


@pytest.fixture(scope="session")
def lucky10_potential(grid12):
    return design_potential(first_lucky(10), grid12)


@pytest.fixture(scope="session")
def filter_apparatus():
    return build_filter_apparatus(lucky_count=10, prime_count=10)
