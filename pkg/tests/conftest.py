import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): test belongs to an acceptance criterion")


@pytest.fixture
def detail(request):
    """Strings appended here are shown next to the criterion's pass/fail line."""
    notes = []
    request.node.acceptance_notes = notes
    return notes


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = mark.args
    _, ok, notes = _RESULTS.get(number, (title, True, []))
    notes = notes + list(getattr(item, "acceptance_notes", []))
    if report.failed:
        notes.append(f"{item.name} failed")
    _RESULTS[number] = (title, ok and report.passed, notes)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, notes = _RESULTS[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if notes:
            line += ": " + "; ".join(notes)
        terminalreporter.write_line(line)
