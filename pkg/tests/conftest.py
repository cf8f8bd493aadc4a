import pytest

from casverify.engine import ExploreConfig, standalone_context


@pytest.fixture
def cfg():
    return ExploreConfig(size_bound=2)


@pytest.fixture
def ctx(cfg):
    return standalone_context(cfg)
