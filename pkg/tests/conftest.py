import pytest

_CRITERIA: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion checked by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    cid = dict(report.user_properties).get("criterion")
    if cid is not None:
        _CRITERIA.setdefault(cid, []).append(report.outcome)


@pytest.fixture(autouse=True)
def _record_criterion(request, record_property):
    mark = request.node.get_closest_marker("criterion")
    if mark is not None:
        record_property("criterion", mark.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: (int(c[0]), c[1:])):
        ok = all(o == "passed" for o in _CRITERIA[cid])
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'}")
