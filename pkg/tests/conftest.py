import pytest

from hawkes_risk import (
    Categorical,
    Degenerate,
    ExpClaim,
    ExpKernel,
    Exponential,
    HawkesModel,
)
from hawkes_risk.risk import RiskModel


@pytest.fixture
def exp_model():
    """nu=1, exponential kernel, Exp(2) marks: mu=2, sigma2=10, theta_c=log(9/8)."""
    return HawkesModel(1.0, ExpKernel(1.0), Exponential(2.0))


@pytest.fixture
def degenerate_model():
    """Unmarked reduction: every impact equals 0.5."""
    return HawkesModel(1.0, ExpKernel(1.0), Degenerate(0.5))


@pytest.fixture
def poisson_model():
    """Zero impact: plain Poisson(nu)."""
    return HawkesModel(1.0, ExpKernel(1.0), Degenerate(0.0))


@pytest.fixture
def two_atom_model():
    """Finite mark law for the variational oracle."""
    return HawkesModel(1.0, ExpKernel(1.0), Categorical((0.2, 0.8), (0.5, 0.5)))


@pytest.fixture
def example_risk(exp_model):
    """The exponential-impacts, exponential-claims model with rho=3, u=10."""
    return RiskModel(exp_model, ExpClaim(1.0), rho=3.0, u=10.0)
