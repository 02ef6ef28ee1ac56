import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from netdiscord import fixtures, network, spectral

settings.register_profile(
    "netdiscord", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("netdiscord")


@pytest.fixture
def circle4():
    return network.make_circle(4)


@pytest.fixture(scope="session")
def two_block():
    return fixtures.two_block()


@pytest.fixture(scope="session")
def two_block_spec(two_block):
    return spectral.decompose(two_block)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[cid])
