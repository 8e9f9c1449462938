import sys
from pathlib import Path

import pytest

from splicekit.diagrams import parse

FIXTURES = Path(__file__).parent / "fixtures"


def load(name: str):
    return parse((FIXTURES / name).read_text(), source=name).payload


def plumbing_fixtures() -> list[str]:
    return sorted(p.name for p in FIXTURES.glob("*.plumbing"))


@pytest.fixture
def gamma_21():
    return load("two_node_21.splice")


@pytest.fixture
def gamma_75():
    return load("two_node_75.splice")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
