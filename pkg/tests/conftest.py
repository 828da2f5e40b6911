import pytest

from parley.config import DEFAULT_PACK_DIR, EngineConfig
from parley.engine import Engine


@pytest.fixture(scope="session")
def pack_dir():
    return DEFAULT_PACK_DIR


@pytest.fixture(scope="session")
def default_engine():
    """Shared read-only engine; tests that mutate conversations must use
    unique conversation ids."""
    return Engine(EngineConfig(seed=42))


@pytest.fixture()
def fresh_engine():
    return Engine(EngineConfig(seed=42))
