import numpy as np
import pytest

from app.core.dependencies import get_service_container
from app.models.distribution import Axis

container = get_service_container()
distributions = container.distributions

EXAMPLE_TABLE = [[0.4, 0.1], [0.1, 0.4]]


@pytest.fixture
def example_joint():
    """2×2 예제: γ = 0.6, ρD = 0.36"""
    return distributions.validate_joint(EXAMPLE_TABLE)


@pytest.fixture
def uniform_joint():
    return distributions.validate_joint(np.full((2, 2), 0.25))


@pytest.fixture
def diagonal_joint():
    return distributions.validate_joint([[0.5, 0.0], [0.0, 0.5]])


@pytest.fixture
def product_joint():
    return distributions.product_joint([0.3, 0.7], [0.2, 0.5, 0.3])


@pytest.fixture
def counterexample():
    return container.theory.build_counterexample()


@pytest.fixture
def independence_proposals():
    def make(joint):
        return (
            distributions.gen_independence_proposal(joint, Axis.Y),
            distributions.gen_independence_proposal(joint, Axis.X),
        )
    return make


@pytest.fixture
def corpus_5x5():
    return distributions.gen_dirichlet_corpus(10, 5, 5, seed=11)


@pytest.fixture
def corpus_3x3():
    return distributions.gen_dirichlet_corpus(10, 3, 3, seed=3)
