_acceptance_lines = []


def report_criterion(num, name, ok, detail=""):
    """Record one acceptance line and fail the test when not ok."""
    status = "PASS" if ok else "FAIL"
    line = f"criterion {num} ({name}): {status}" + (f" [{detail}]" if detail else "")
    _acceptance_lines.append((num, line))
    print(f"[acceptance] {line}")
    assert ok, line


def pytest_terminal_summary(terminalreporter, exitstatus):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
