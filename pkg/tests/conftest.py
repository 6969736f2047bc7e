"""Print one verdict line per release criterion at the end of the run."""

_acceptance_results: list[tuple[str, str, float]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    _acceptance_results.append((name, outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in _acceptance_results:
        terminalreporter.write_line(f"{outcome}  {name}  ({duration:.2f}s)")
