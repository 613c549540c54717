# tests/conftest.py
import numpy as np
import pytest

from pacrank.oracle.duel import OracleContext
from pacrank.oracle.models import AdjacentGapModel, MatrixModel
from pacrank.utils.settings import get_settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep results and the database inside the test's tmp dir."""
    monkeypatch.setenv("PACRANK_RESULTS_DIR", str(tmp_path / "results"))
    monkeypatch.setenv("PACRANK_DATABASE_URL", f"sqlite:///{tmp_path / 'results' / 'pacrank.db'}")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def adjacent():
    return AdjacentGapModel(10, 0.6)


@pytest.fixture
def noiseless():
    """p = 1 for the stronger element: every duel is deterministic."""
    def build(n):
        return AdjacentGapModel(n, 1.0)
    return build


@pytest.fixture
def make_ctx():
    def build(model, seed=0):
        return OracleContext(model, seed=seed)
    return build


def linear_model(values):
    """p(i, j) = 1/2 + v_i - v_j; element k has value values[k-1]."""
    v = np.asarray(values, dtype=float)
    return MatrixModel(0.5 + v[:, None] - v[None, :])


@pytest.fixture
def linear():
    return linear_model
