import numpy as np
import pytest
from hypothesis import settings

from tkk import CartanI, CartanII, CartanIII, Spin, Sum

settings.register_profile("default", max_examples=20, deadline=None)
settings.load_profile("default")

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}

SPACES = {
    "cartan1_2x3": CartanI(2, 3),
    "cartan2_4": CartanII(4),
    "cartan3_3": CartanIII(3),
    "spin4": Spin(4),
    "sum": Sum([CartanI(2, 2), Spin(3)]),
}

# small enough for per-test TKK construction
SMALL_SPACES = {
    "cartan1_2x2": CartanI(2, 2),
    "cartan1_1x2": CartanI(1, 2),
    "cartan3_2": CartanIII(2),
    "spin3": Spin(3),
}


@pytest.fixture(params=list(SPACES), ids=list(SPACES))
def space(request):
    return SPACES[request.param]


@pytest.fixture(params=list(SMALL_SPACES), ids=list(SMALL_SPACES))
def small_space(request):
    return SMALL_SPACES[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
