"""Shared pytest wiring: surface acceptance verdict lines in the summary."""

import helpers


def pytest_terminal_summary(terminalreporter):
    if helpers.VERDICT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in helpers.VERDICT_LINES:
            terminalreporter.line(line)
