"""Shared pytest plumbing.

The acceptance tests register one summary line each; the hook below prints
them at the end of the run so every criterion shows a visible pass/fail
line even when pytest captures stdout.
"""

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance_line(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
