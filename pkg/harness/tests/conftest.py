import numpy as np
import pytest

from gnnharness import GraphRecord, load_corpus

from corpus_helpers import make_corpus_files


@pytest.fixture(scope="session")
def small_corpus_paths(tmp_path_factory):
    td = tmp_path_factory.mktemp("small")
    return make_corpus_files(td, 40, seed=5, name="small")


@pytest.fixture(scope="session")
def small_corpus(small_corpus_paths):
    return load_corpus(*small_corpus_paths)


@pytest.fixture
def record_p3() -> GraphRecord:
    x = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]], dtype=np.float32)
    return GraphRecord(id=0, n=3, edges=((0, 1), (1, 2)), label=0, x=x)


@pytest.fixture
def record_star() -> GraphRecord:
    x = np.eye(4, 2, dtype=np.float32)
    return GraphRecord(id=1, n=4, edges=((0, 1), (0, 2), (0, 3)), label=1, x=x)
