import numpy as np
import pytest

from nc_orlicz.nfunction import ExpType, Power, PowerLog
from nc_orlicz.sampling import tabulated_power

# lines collected by the acceptance tests, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


PARAMETRIC = [Power(1.5), Power(2.0), Power(3.0), PowerLog(1.0), PowerLog(2.0), ExpType()]
PARAMETRIC_IDS = ["power-1.5", "power-2", "power-3", "power-log-1", "power-log-2", "exp-type"]


@pytest.fixture(params=PARAMETRIC, ids=PARAMETRIC_IDS)
def parametric(request):
    return request.param


@pytest.fixture(scope="session")
def tab2():
    return tabulated_power(2.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
