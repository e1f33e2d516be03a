import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

_ACCEPTANCE: dict[str, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    key = str(number)
    failed = rep.failed or (rep.when == "call" and hasattr(rep, "wasxfail"))
    if rep.when == "call" or failed:
        note = ""
        if hasattr(rep, "wasxfail"):
            note = rep.wasxfail
        elif rep.failed:
            note = str(rep.longrepr.reprcrash.message) if hasattr(rep.longrepr, "reprcrash") else "error"
        status = "FAIL" if failed else "PASS"
        prev = _ACCEPTANCE.get(key)
        if prev is None or prev[0] == "PASS":
            _ACCEPTANCE[key] = (status, title, note)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=int):
        status, title, note = _ACCEPTANCE[key]
        line = f"[{status}] {key:>3}  {title}"
        if status == "FAIL" and note:
            line += f"  ({note.splitlines()[0]})"
        terminalreporter.write_line(line)
