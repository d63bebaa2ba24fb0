from pathlib import Path

import pytest
from hypothesis import settings

from pursuitlab.kinematics import PursuitScenario
from pursuitlab.scenario_io import load_fixture

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"


@pytest.fixture
def ex1_scenario():
    return PursuitScenario(200.0, 100.0, (8.0, 56.0, 78.0), (23.0, 137.0, 182.0))


@pytest.fixture
def ex2_scenario():
    return PursuitScenario(50.0, 80.0, (4.0, 10.0, 16.0), (8.0, 10.0, 16.0))


@pytest.fixture(scope="session")
def fixtures():
    names = ["game_example1", "game_example2", "assignment_example3", "assignment_example4", "check_six_speed"]
    return {name: load_fixture(name) for name in names}


_VERDICTS: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _VERDICTS[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_VERDICTS):
            terminalreporter.write_line(_VERDICTS[number])
