import math
from pathlib import Path

import pytest

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture
def problems_dir():
    return PROBLEMS


def rel_err(a, b):
    return abs(a - b) / abs(b)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
