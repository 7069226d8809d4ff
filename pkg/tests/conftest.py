import pytest

_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion.

    Lines are printed as they happen and again in the terminal summary so
    they stay visible when output capture is on.
    """

    def record(label, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _RESULTS.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)
