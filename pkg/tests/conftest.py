"""Acceptance bookkeeping: tests marked ``criterion(n, title)`` get one PASS/FAIL
line each in the terminal summary, with whatever detail they recorded."""
import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.fixture
def detail(request):
    """Append a short human-readable measurement to the criterion's summary line."""
    notes = []
    request.node.user_properties.append(("detail", notes))
    return notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    number, title = mark.args
    notes = next((v for k, v in item.user_properties if k == "detail"), [])
    _, prev_passed, prev_notes = _RESULTS.get(number, (title, True, []))
    _RESULTS[number] = (title, prev_passed and rep.passed, prev_notes + [str(n) for n in notes])


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, passed, notes = _RESULTS[number]
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}"
        if notes:
            line += f"  [{'; '.join(notes)}]"
        terminalreporter.write_line(line)
