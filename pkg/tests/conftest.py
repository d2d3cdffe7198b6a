import pytest

from hamosc import make_context


@pytest.fixture(scope="session")
def ctx():
    return make_context(50)


@pytest.fixture(scope="session")
def ctx30():
    return make_context(30)
