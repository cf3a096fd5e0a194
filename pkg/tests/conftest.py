import time
from pathlib import Path

import pytest

from vocbf.scenario import load_scenario
from vocbf.simulator import run_scenario

REPO_ROOT = Path(__file__).resolve().parent.parent
SCENARIO_DIR = REPO_ROOT / "scenarios"


@pytest.fixture(scope="session")
def scenario1_path() -> Path:
    return SCENARIO_DIR / "scenario1.json"


@pytest.fixture(scope="session")
def scenario2_path() -> Path:
    return SCENARIO_DIR / "scenario2.json"


def _timed_run(path):
    config = load_scenario(path)
    start = time.perf_counter()
    log, summary = run_scenario(config)
    elapsed = time.perf_counter() - start
    return config, log, summary, elapsed


@pytest.fixture(scope="session")
def scenario1_run(scenario1_path):
    return _timed_run(scenario1_path)


@pytest.fixture(scope="session")
def scenario2_run(scenario2_path):
    return _timed_run(scenario2_path)
