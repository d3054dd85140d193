import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from logitgof import Dataset, finney

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[
        HealthCheck.too_slow,
        # the dataset factory fixture is stateless, safe to reuse across examples
        HealthCheck.function_scoped_fixture,
    ],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def finney_dataset() -> Dataset:
    return finney()


@pytest.fixture
def make_random_dataset():
    """Factory for small random datasets with continuous covariates.

    Drawing coefficients near the origin keeps most fits well inside the
    convergence region; callers that need separation build it by hand.
    """

    def make(seed: int, n: int, m: int) -> Dataset:
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(n, m))
        beta = rng.normal(scale=0.8, size=m)
        eta = 0.3 * rng.normal() + x @ beta
        y = (rng.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(int)
        return Dataset(y, x)

    return make
