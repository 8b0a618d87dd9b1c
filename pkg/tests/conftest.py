import pytest

from repgame import chain3, chsh, diag3, ghz, sat_demo


@pytest.fixture(scope="session")
def chsh_game():
    return chsh()


@pytest.fixture(scope="session")
def chain3_game():
    return chain3()


@pytest.fixture(scope="session")
def ghz_game():
    return ghz()


@pytest.fixture(scope="session")
def diag3_game():
    return diag3()


@pytest.fixture(scope="session")
def sat_demo_game():
    return sat_demo()
