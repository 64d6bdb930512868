import re

import pytest


@pytest.fixture
def tw6():
    return (2,) * 6


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERIA

    outcome = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", getattr(rep, "nodeid", ""))
            if m and rep.when == "call" or (m and status != "passed"):
                key = int(m.group(1))
                outcome[key] = outcome.get(key, True) and status == "passed"
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        if k in outcome:
            terminalreporter.write_line(f"criterion {k}: {'PASS' if outcome[k] else 'FAIL'}  {CRITERIA[k]}")
