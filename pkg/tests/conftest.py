import numpy as np
import pytest

from bcmetrics import build_basis, egg, unit_ball, unit_bidisc, unit_disc


@pytest.fixture(scope="session")
def disc():
    return unit_disc()


@pytest.fixture(scope="session")
def bidisc():
    return unit_bidisc()


@pytest.fixture(scope="session")
def ball2():
    return unit_ball(2)


@pytest.fixture(scope="session")
def egg12():
    return egg((1.0, 2.0))


@pytest.fixture(scope="session")
def basis_disc40(disc):
    return build_basis(disc, 40)


@pytest.fixture(scope="session")
def basis_bidisc8(bidisc):
    return build_basis(bidisc, 8)


@pytest.fixture(scope="session")
def basis_ball8(ball2):
    return build_basis(ball2, 8)


@pytest.fixture(scope="session")
def basis_egg10(egg12):
    return build_basis(egg12, 10)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
