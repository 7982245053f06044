from dataclasses import dataclass, asdict
from enum import Enum
from typing import Dict


@dataclass(frozen=True)
class ThermoProps:
    """Partition functions, fermionic weight and internal energies at one point"""
    ln_z_fermi: float
    ln_z_bose: float
    ln_z_total: float
    p_fermi: float
    u_fermi: float
    u_bose: float
    u_total: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class CapacityReport:
    """First and second derivatives of the internal energy"""
    c_temp: float
    c_nu: float
    c_omega: float
    d2_temp: float
    d2_nu: float
    d2_omega: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class PfDerivatives:
    """Derivatives of the fermionic weight with respect to each control parameter"""
    d_beta: float
    d_nu: float
    d_omega: float
    d2_beta: float
    d2_nu: float
    d2_omega: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


class SpinDimensionRule(str, Enum):
    D_EQUALS_N = "d_equals_N"
    D_FIXED = "d_fixed"


@dataclass(frozen=True)
class AsymptoticCapacities:
    """Capacities per N^2 at the transition midpoint"""
    n_particles: int
    spin_dim: int
    nu: float
    h: float
    c_temp_density: float
    c_nu_density: float
    c_omega_density: float
    reference_c_temp_density: float  # k_B h^2 / (4 N^2)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)
