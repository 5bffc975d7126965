import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rackcover import analysis, fixture


@pytest.fixture(scope="session")
def catalog():
    """Every rack of size at most 4, by exhaustive row-tuple enumeration."""
    return [Q for n in (1, 2, 3, 4) for Q in analysis.all_racks(n)]


@pytest.fixture(scope="session")
def named_fixtures():
    return {name: fixture(name) for name in ("Q3", "R3", "Q4", "R5", "P_3", "C_4")}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance verdict lines after the test summary."""
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LEDGER", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
