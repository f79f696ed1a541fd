import pathlib

import pytest

from colliderlab import compile_sem, generate, library

REPO = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def repo_root() -> pathlib.Path:
    return REPO


@pytest.fixture(scope="session")
def confounder_sem():
    return library.confounder_demo()


@pytest.fixture(scope="session")
def collider_sem():
    return library.collider_demo()


@pytest.fixture(scope="session")
def sodium_sem():
    return library.sodium_pressure_model()


@pytest.fixture(scope="session")
def sodium_data_1k(sodium_sem):
    return generate(sodium_sem, 1000, 777)


@pytest.fixture(scope="session")
def sodium_data_1m(sodium_sem):
    return generate(sodium_sem, 1_000_000, 20240)
