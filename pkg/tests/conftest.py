from collections import defaultdict
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_criteria: dict[int, list[tuple[str, str]]] = defaultdict(list)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "pass" if report.passed else ("skip" if report.skipped else "FAIL")
        _criteria[marker.args[0]].append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        failed = [name for name, s in results if s == "FAIL"]
        verdict = "FAIL" if failed else "PASS"
        line = f"criterion {n}: {verdict} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
