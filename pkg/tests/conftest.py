from __future__ import annotations

import pytest

_CRITERIA: dict = {}


@pytest.fixture
def criterion():
    """Record a labelled acceptance outcome; the summary prints one line per label."""

    def record(label: str, ok: bool, detail: str = ""):
        _CRITERIA[label] = (ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[1])):
        ok, detail = _CRITERIA[label]
        line = f"{label}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
