import numpy as np
import pytest

from contamtest import (
    BayesConfig,
    ContaminationParams,
    Exponential,
    Gaussian,
    contaminate,
)


@pytest.fixture(scope="session")
def bayes():
    """Equal priors, unit costs."""
    return BayesConfig(q0=0.5, c01=1.0, c10=1.0)


@pytest.fixture(scope="session")
def ref_params():
    """Ground-truth proportions of both reference scenarios."""
    return ContaminationParams(0.2, 0.3)


@pytest.fixture(scope="session")
def gauss_pair(ref_params):
    return contaminate(Gaussian(0.0, 1.0), Gaussian(0.2, 2.0), ref_params)


@pytest.fixture(scope="session")
def exp_pair(ref_params):
    return contaminate(Exponential(1.0), Exponential(2.0), ref_params)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
