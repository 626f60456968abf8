import pytest

from lerw_edge.lattice import build_domain


@pytest.fixture(scope="session")
def d2():
    return build_domain(2)


@pytest.fixture(scope="session")
def d3():
    return build_domain(3)
