import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record (number, passed, detail) for the acceptance summary, then assert."""

    def record(number, passed, detail):
        _CRITERIA[number] = (bool(passed), detail)
        assert passed, f"criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
