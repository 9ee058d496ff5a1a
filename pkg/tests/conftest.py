import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion.

    Call ``acceptance(number, title, ok, detail)`` before asserting so the
    line is printed even when the assertion fails.
    """

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        mark = "PASS" if ok else "FAIL"
        _LINES[number] = f"[{mark}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        print(_LINES[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_LINES):
        terminalreporter.write_line(_LINES[number])
