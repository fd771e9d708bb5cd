import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

NM = 1e-9


@pytest.fixture
def k500():
    return 2 * math.pi / (500 * NM)


@pytest.fixture
def k600():
    return 2 * math.pi / (600 * NM)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
