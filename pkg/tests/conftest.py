import math
import sys

import pytest

from handplan.model import FingerChain
from handplan.scenario_file import parse_scenario
from handplan.scenarios import build_scenario


@pytest.fixture
def bent_finger():
    """Unit-link finger bent 45 degrees at each joint."""
    return FingerChain.from_link_angles((0.0, 0.0), (0.0, math.pi / 4, math.pi / 2), (1.0, 1.0, 1.0))


@pytest.fixture(scope="session")
def stock_spec():
    return parse_scenario("builtin:ellipse_2f_roll15")


@pytest.fixture(scope="session")
def stock_scene(stock_spec):
    return build_scenario(stock_spec)


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        line = mod.RESULTS.get(n, f"criterion {n:2d}: FAIL  no result recorded (errored or deselected)")
        terminalreporter.write_line(line)
