import time

import pytest

_LINES: list[tuple[str, str, float]] = []


@pytest.fixture
def criterion(request):
    """Times the test body and records one PASS/FAIL line for the summary."""
    label = request.node.get_closest_marker("criterion").args[0]
    start = time.perf_counter()
    yield
    report = getattr(request.node, "rep_call", None)
    ok = report is not None and report.passed
    _LINES.append((label, "PASS" if ok else "FAIL", time.perf_counter() - start))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, secs in sorted(_LINES, key=lambda x: int(x[0].split(".")[0])):
        terminalreporter.write_line(f"{status}  {label}  ({secs:.3f} s)")
