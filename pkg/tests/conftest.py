import math

import pytest
from hypothesis import HealthCheck, settings

from grusslab.funcspace import standard_corpus

settings.register_profile(
    "ci",
    max_examples=50,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def corpus01():
    return standard_corpus((0.0, 1.0))


@pytest.fixture(scope="session")
def corpus_pm():
    return standard_corpus((-1.0, 1.0))


@pytest.fixture(scope="session")
def corpus_ray():
    return standard_corpus((0.0, math.inf))
