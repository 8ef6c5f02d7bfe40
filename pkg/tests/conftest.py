import pytest
from hypothesis import HealthCheck, settings

from cecac.model import Instance

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    ok = report.passed
    prev = _ACCEPTANCE.get(number, (title, True))
    if report.when == "call" or not ok:
        _ACCEPTANCE[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def e1():
    return Instance.build(
        [("c1", {"a1"}, 3), ("c2", {"a2"}, 2), ("c3", {"a3"}, 5), ("c4", (), 4)],
        ["a1 -> a2", "a3 -> ~a2"], k=2, p=8, name="E1")


@pytest.fixture
def e2(e1):
    return e1.replace(constraints=["a1 -> a2"])
