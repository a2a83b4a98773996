from dataclasses import replace
from pathlib import Path

import pytest

from thzrf import config

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

# (criterion, label, passed, detail) lines filled in by test_acceptance
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def baseline_values():
    return config.read_scenario_values(CONFIGS / "baseline.cfg")


@pytest.fixture(scope="session")
def baseline(baseline_values):
    return config.build_scenario(baseline_values)


@pytest.fixture
def make_scenario(baseline_values):
    """Scenario from the baseline with display-unit overrides."""

    def build(**overrides):
        values = dict(baseline_values)
        values.update(overrides)
        return config.build_scenario(values)

    return build


def with_thz(scenario, **changes):
    return replace(scenario, thz=replace(scenario.thz, **changes))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, passed, detail in sorted(ACCEPTANCE_LINES):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {label} ({detail})")
