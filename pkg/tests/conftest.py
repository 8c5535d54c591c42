from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gdcheck.syntax import parse_kb

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

_criteria: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        _criteria.append((*marker.args, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, verdict in sorted(_criteria, key=lambda c: int(c[0])):
        terminalreporter.write_line(f"criterion {number} [{verdict}] {title}")


def load(name: str):
    return parse_kb((CORPUS / name).read_text(encoding="utf-8"))


@pytest.fixture
def corpus():
    return load
