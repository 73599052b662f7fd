import os
import sys
from pathlib import Path

import pytest

# Keep exact searches bounded and logs quiet before importing ctl
os.environ.setdefault("CTL_TIME_BUDGET", "120")
os.environ.setdefault("CTL_LOG_LEVEL", "WARNING")

# Add the project root to the Python path so pytest can find the ctl package
project_root = str(Path(__file__).parent)
sys.path.insert(0, project_root)

from ctl.core.graph import Graph  # noqa: E402
from ctl.core.graph6 import read_graphs  # noqa: E402
from ctl.services.catalog import named_graph  # noqa: E402


# Add command-line option to skip slow tests
def pytest_addoption(parser):
    parser.addoption("--skip-slow", action="store_true", default=False, help="Skip slow tests")


def pytest_configure(config):
    """Register slow marker and configure it to be skipped when --skip-slow is used."""
    config.addinivalue_line("markers", "slow: marks tests as slow (skipped with --skip-slow)")

    if config.getoption("--skip-slow"):
        markexpr = config.getoption("markexpr") or ""
        if markexpr:
            markexpr = f"{markexpr} and not slow"
        else:
            markexpr = "not slow"
        config.option.markexpr = markexpr


@pytest.fixture
def graph():
    """Resolve a catalog name such as ``K4``, ``C5`` or ``petersen``."""
    return named_graph


@pytest.fixture
def triangle() -> Graph:
    return named_graph("K3")


@pytest.fixture
def c5() -> Graph:
    return named_graph("C5")


@pytest.fixture
def petersen() -> Graph:
    return named_graph("petersen")


@pytest.fixture(scope="session")
def corpus8():
    """Connected 8-vertex graphs from ``CTL_CORPUS_G6`` (e.g. ``geng -c 8`` output)."""
    path = os.getenv("CTL_CORPUS_G6")
    if not path:
        pytest.skip("CTL_CORPUS_G6 is not set")
    with open(path, "rb") as handle:
        return [g for _, g in read_graphs(handle)]
