import pytest

from goldprod.bigreal import PrecisionCtx


@pytest.fixture
def ctx128():
    return PrecisionCtx(128)


@pytest.fixture
def ctx256():
    return PrecisionCtx(256)


# -- acceptance summary --------------------------------------------------------
# tests tagged @pytest.mark.criterion(n, title) roll up into one line each;
# a criterion passes only if every test carrying its number passed

_criteria: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        n, title = mark.args
        entry = _criteria.setdefault(n, [title, True])
        entry[1] = entry[1] and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
