import pytest

from hyporb.maps import get_map
from hyporb.orbifolds import build_associated_orbifold


@pytest.fixture(scope="session")
def cosh_map():
    return get_map("cosh")


@pytest.fixture(scope="session")
def pi_sinh_map():
    return get_map("pi_sinh")


@pytest.fixture(scope="session")
def cosh_minus_one_map():
    return get_map("cosh_minus_one")


@pytest.fixture(scope="session")
def cosh_pair(cosh_map):
    return build_associated_orbifold(cosh_map, 8)


@pytest.fixture(scope="session")
def pi_sinh_pair(pi_sinh_map):
    return build_associated_orbifold(pi_sinh_map, 10)


@pytest.fixture(scope="session")
def cosh_minus_one_pair(cosh_minus_one_map):
    return build_associated_orbifold(cosh_minus_one_map, 8)
