import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import worked_example_snapshot


@pytest.fixture(scope="session")
def worked_example():
    return worked_example_snapshot()


@pytest.fixture(scope="session")
def worked_example_with_single_edge():
    return worked_example_snapshot(single_edge_candidate=True)
