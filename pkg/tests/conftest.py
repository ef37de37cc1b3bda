import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria at their stated limits")


@pytest.fixture(scope="session")
def three_chain():
    from vapproach.quantales import chain_frame
    return chain_frame(3)


@pytest.fixture(scope="session")
def two():
    from vapproach.quantales import two_chain
    return two_chain()


@pytest.fixture(scope="session")
def small_delta():
    from vapproach.quantales import small_delta_grid
    return small_delta_grid()
