import pytest

# one line per acceptance criterion, filled in by the test_acceptance module
_ac_results: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = marker.args[0]
    if rep.when == "call" or rep.failed or rep.skipped:
        prev = _ac_results.get(key)
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        if prev != "FAIL":
            _ac_results[key] = status


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion covered by a test")


def pytest_terminal_summary(terminalreporter):
    if not _ac_results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ac_results, key=lambda k: int(k.split("-")[1])):
        terminalreporter.write_line(f"{key}: {_ac_results[key]}")
