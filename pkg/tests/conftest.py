import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twinbuild import coxeter as cx  # noqa: E402


@pytest.fixture(scope="session")
def mats():
    names = ["A2", "A3", "B2", "B3", "~A1", "~A2", "H3"]
    return {n: cx.matrix_from_name(n) for n in names}


# --- acceptance report -------------------------------------------------------

_ACCEPTANCE: list = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        number, title = marker.args
        status = "PASS" if rep.passed else "FAIL"
        detail = getattr(item, "criterion_detail", "")
        _ACCEPTANCE.append((number, title, status, rep.duration, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, status, duration, detail in sorted(_ACCEPTANCE):
        line = f"{status} criterion {number:2d}: {title} [{duration:.1f}s]"
        if detail:
            line += f" {detail}"
        terminalreporter.write_line(line)
