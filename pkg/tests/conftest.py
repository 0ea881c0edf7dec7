import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20201118)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test asserts, this only reports."""
    entry = {"label": request.node.name, "passed": False, "detail": ""}
    ACCEPTANCE_LINES.append(entry)

    def report(label, passed, detail):
        entry.update(label=label, passed=bool(passed), detail=detail)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for entry in ACCEPTANCE_LINES:
        status = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"{status}  {entry['label']}: {entry['detail']}")
