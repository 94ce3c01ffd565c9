import os

import pytest
from hypothesis import HealthCheck, settings

from allowance_auctions._kernels import backends
from allowance_auctions.model import AuctionInstance

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = {}


@pytest.fixture(params=sorted(backends()))
def kernel(request):
    return backends()[request.param]


@pytest.fixture
def worked():
    """Two bidders bidding 5 and 3 for one slot of CTR 1."""
    def make(gamma0, gamma1=0.0):
        return AuctionInstance.create([5.0, 3.0], [1.0], [gamma0, gamma1])
    return make


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
