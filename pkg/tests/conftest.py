import json
from pathlib import Path

import pytest

from fairdistrict.ensemble.enumeration import enumerate_districtings
from fairdistrict.ensemble.graph import grid_graph
from fairdistrict.intervals import Instance

DATA = Path(__file__).parent / "data"


def pytest_configure(config):
    config.acceptance_results = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if config.acceptance_results:
        terminalreporter.section("acceptance criteria")
        for line in sorted(config.acceptance_results):
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""

    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
        request.config.acceptance_results.append(line)
        print(line)

    return record


@pytest.fixture(scope="session")
def packed_instances():
    return [Instance.from_json(x) for x in json.loads((DATA / "packed_instances.json").read_text())]


@pytest.fixture(scope="session")
def grid6():
    """6x6 grid, three districts, party 1 share running from 40% to 60% across columns."""
    return grid_graph(6, 6, "gradient", m=3, share=0.5, spread=0.2, epsilon="2/100")


@pytest.fixture(scope="session")
def grid6_enumeration(grid6):
    return enumerate_districtings(grid6)
