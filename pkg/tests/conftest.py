import pytest

from diracvisc import ModelParams, build_spectrum


@pytest.fixture(scope="session")
def params20():
    return ModelParams(disorder_A=20.0)


@pytest.fixture(scope="session")
def params50():
    return ModelParams(disorder_A=50.0)


@pytest.fixture(scope="session")
def params500():
    return ModelParams(disorder_A=500.0)


@pytest.fixture(scope="session")
def spectrum10_20(params20):
    return build_spectrum(params20, 10.0)


@pytest.fixture(scope="session")
def spectrum10_50(params50):
    return build_spectrum(params50, 10.0)


@pytest.fixture(scope="session")
def spectrum10_500(params500):
    return build_spectrum(params500, 10.0)
