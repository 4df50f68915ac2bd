import pytest

from src.generators import (complete_graph, corpus, cycle_graph, grid2d_voltage,
                            honeycomb_voltage, line_voltage, path_graph, petersen_graph)

SEED = 2024


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch):
    """Keep a developer's .env or shell settings out of the tests"""
    for name in ("QWZETA_THREADS", "QWZETA_GRID", "QWZETA_LOG_LEVEL",
                 "QWZETA_RESULTS_DIR", "QWZETA_SEED"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr("src.config.ENV_PATH", "/nonexistent/.env")


@pytest.fixture(scope="session")
def graph_corpus():
    """C3..C10, K4, K5, Petersen and ten random connected graphs"""
    return corpus(seed=SEED)


@pytest.fixture(scope="session", params=["cycle-3", "cycle-6", "complete-4", "complete-5",
                                         "petersen", "random-5-2024", "random-9-2028"])
def sample_graph(request, graph_corpus):
    # random members: n = 4 + seed % 7
    return graph_corpus[request.param]


@pytest.fixture
def triangle():
    return cycle_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def petersen():
    return petersen_graph()


@pytest.fixture
def path4():
    return path_graph(4)


@pytest.fixture
def line():
    return line_voltage()


@pytest.fixture
def grid2d():
    return grid2d_voltage()


@pytest.fixture
def honeycomb():
    return honeycomb_voltage()
