"""Shared pytest plumbing.

The acceptance suite registers one line per criterion here; the terminal
summary hook re-emits them after the run so they survive output capture.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
