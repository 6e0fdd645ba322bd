from pathlib import Path

import pytest

from ctrlfeat import Graph, GraphDataset, ingest_dataset

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_paths():
    return DATA_DIR / "fixture_edges.json", DATA_DIR / "fixture_labels.csv"


@pytest.fixture(scope="session")
def fixture_dataset(fixture_paths) -> GraphDataset:
    edges, labels = fixture_paths
    return ingest_dataset(edges, labels, "fixture")


@pytest.fixture
def p3() -> Graph:
    return Graph(id=0, n=3, edges=((0, 1), (1, 2)))


@pytest.fixture
def k4() -> Graph:
    return Graph(id=1, n=4, edges=((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


@pytest.fixture
def star5() -> Graph:
    return Graph(id=2, n=5, edges=((0, 1), (0, 2), (0, 3), (0, 4)))


@pytest.fixture
def k2() -> Graph:
    return Graph(id=3, n=2, edges=((0, 1),))


@pytest.fixture
def edgeless() -> Graph:
    return Graph(id=4, n=4, edges=())
