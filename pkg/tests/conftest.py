from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
CORPUS = FIXTURES / "corpus"
VIOLATIONS = FIXTURES / "violations"
COMPLETE_EXAMPLE = CORPUS / "complete_example.syn"

sys.path.insert(0, str(TESTS))


@pytest.fixture
def complete_example_text() -> str:
    return COMPLETE_EXAMPLE.read_text(encoding="utf-8")


def pytest_terminal_summary(terminalreporter, exitstatus, config):  # noqa: ARG001
    """One PASS/FAIL line per acceptance criterion, in criterion order."""
    from test_acceptance import CRITERIA

    outcomes: dict[str, str] = {}
    for status in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if status != "passed" or name not in outcomes:
                outcomes[name] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, (name, label) in enumerate(CRITERIA.items(), start=1):
        result = outcomes.get(name, "NOT RUN")
        terminalreporter.write_line(f"[{result}] criterion {number}: {label}")
