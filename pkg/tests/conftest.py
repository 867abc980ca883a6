"""Shared test plumbing: the acceptance scoreboard.

Acceptance tests record one (number, label, verdict) entry each; the
terminal summary prints them as a block after the run so the criteria can
be audited at a glance without grepping the dots.
"""

import pytest

_SCOREBOARD = []


@pytest.fixture
def criterion():
    """Record a numbered acceptance verdict, then assert it."""

    def _record(num, label, ok, detail=""):
        _SCOREBOARD.append((num, label, bool(ok), detail))
        assert ok, f"acceptance criterion {num} ({label}) failed: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _SCOREBOARD:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok, detail in sorted(_SCOREBOARD):
        verdict = "PASS" if ok else "FAIL"
        suffix = f"  [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {num:2d} {verdict}  {label}{suffix}")
