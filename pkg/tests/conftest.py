import pytest

from cavidyn import Params, integrate


@pytest.fixture(scope="session")
def default_params():
    return Params()


@pytest.fixture(scope="session")
def default_traj(default_params):
    """The standard 5 ps trajectory; shared by observable and acceptance tests."""
    return integrate(default_params)


@pytest.fixture(scope="session")
def lam0_traj():
    """Isolated-TLS reference run (cavity decoupled)."""
    return integrate(Params(lambda_c=0.0))
