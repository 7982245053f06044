import pytest

from app.models.system import SystemParams, ThermoPoint


@pytest.fixture
def pair_params() -> SystemParams:
    """N = d = 2, hbar*omega = 1, no bias"""
    return SystemParams(n_particles=2, spin_dim=2, omega=1.0, nu=0.0, hbar=1.0, k_boltzmann=1.0)


@pytest.fixture
def pair_point(pair_params) -> ThermoPoint:
    return ThermoPoint(params=pair_params, beta=1.0)


def make_point(n: int, d: int, beta: float = 1.0, omega: float = 1.0, nu: float = 0.0) -> ThermoPoint:
    params = SystemParams(n_particles=n, spin_dim=d, omega=omega, nu=nu, hbar=1.0, k_boltzmann=1.0)
    return ThermoPoint(params=params, beta=beta)
