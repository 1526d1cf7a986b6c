"""Suite-level wiring: surface acceptance verdict lines in the summary."""

_verdicts = []


def record_verdict(line):
    _verdicts.append(line)


def pytest_terminal_summary(terminalreporter):
    if _verdicts:
        terminalreporter.section("acceptance verdicts")
        for line in _verdicts:
            terminalreporter.write_line(line)
