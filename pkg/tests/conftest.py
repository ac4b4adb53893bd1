"""Prints one pass/fail line per acceptance criterion after the run."""

_CRITERIA = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _CRITERIA.append((props["criterion"], report.passed, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        line = f"criterion {name}: {'PASS' if passed else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
