"""Shared test helpers: acceptance-criterion result reporting."""

_criterion_lines = []


def record_criterion(name: str, ok: bool):
    """Register a one-line verdict shown in the terminal summary."""
    _criterion_lines.append(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.write_line("")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
