from collections import defaultdict

import pytest

_outcomes: dict[str, list[tuple[str, str]]] = defaultdict(list)
_titles: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(criterion, title): acceptance criterion")
    config.addinivalue_line("markers", "slow: long-running numerical test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        crit, title = marker.args
        _titles[crit] = title
        _outcomes[crit].append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_outcomes, key=lambda c: int(c)):
        parts = _outcomes[crit]
        ok = all(o == "passed" for _, o in parts)
        tr.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}  {_titles[crit]}")
        for name, o in parts:
            if not ok:
                tr.write_line(f"    {o.upper():7s} {name}")
