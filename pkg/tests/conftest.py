import os

import pytest

from kontsevich_check.config import Config
from kontsevich_check.core.algebra import clear_basis_cache

SAMPLE_INPUT = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), 'docs', 'sample-input')


def load_test_config(degree=2, samples=20000, seed=0, workers=1,
                     full_relations=False):
    config = Config()
    config.set_defaults()
    config.debug = False
    config.silent = False
    config.record_statistics = False
    config.degree = degree
    config.samples = samples
    config.seed = seed
    config.workers = workers
    config.full_relations = full_relations
    # Tests never read or write the associator cache in the home directory.
    config.cache_dir = None
    return config


@pytest.fixture(autouse=True)
def test_config():
    return load_test_config()


@pytest.fixture
def sample_input():
    def path(*parts):
        return os.path.join(SAMPLE_INPUT, *parts)
    return path


@pytest.fixture
def fresh_bases():
    clear_basis_cache()
    yield
    clear_basis_cache()
