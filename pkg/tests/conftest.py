import pytest

from sdpgroup.selftest import oracle_instance


@pytest.fixture(scope="session")
def inst332():
    return oracle_instance(3, 3, 2)


@pytest.fixture(scope="session")
def inst322():
    return oracle_instance(3, 2, 2)
