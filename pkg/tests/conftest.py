"""Shared test helpers: one visible pass/fail line per acceptance criterion."""

_LINES = []


def record_criterion(num: int, name: str, ok: bool, detail: str = "") -> bool:
    """Print and remember a criterion verdict line; returns ok for asserting."""
    status = "PASS" if ok else "FAIL"
    line = f"[criterion {num:02d}] {name}: {status}"
    if detail:
        line += f" ({detail})"
    _LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(set(_LINES)):
        terminalreporter.write_line(line)
