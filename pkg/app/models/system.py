from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.config import settings


class FreeParameter(str, Enum):
    """Control parameter solved for when locating the transition"""
    BETA = "beta"
    OMEGA = "omega"
    NU = "nu"


class SystemParams(BaseModel):
    """Static problem definition: N particles with spin dimension d in a harmonic trap"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    n_particles: int = Field(..., ge=1, description="Number of particles N")
    spin_dim: int = Field(..., ge=1, description="Auxiliary spin dimension d")
    omega: float = Field(..., gt=0, description="Trap angular frequency")
    nu: float = Field(default=0.0, description="Symmetry bias energy")
    hbar: float = Field(default_factory=lambda: settings.HBAR, gt=0)
    k_boltzmann: float = Field(default_factory=lambda: settings.K_BOLTZMANN, gt=0)

    @property
    def antisymmetric_empty(self) -> bool:
        """True when C(d, N) = 0 and only the fermionic branch survives"""
        return self.spin_dim < self.n_particles

    @property
    def pair_count(self) -> float:
        """N(N-1)/2"""
        return 0.5 * self.n_particles * (self.n_particles - 1)

    @property
    def pauli_energy(self) -> float:
        """Ground-state excess of N trapped fermions over N bosons"""
        return self.hbar * self.omega * self.pair_count

    def replace(self, **changes: Any) -> "SystemParams":
        """Return a validated copy with some fields replaced"""
        return SystemParams.model_validate({**self.model_dump(), **changes})


class ThermoPoint(BaseModel):
    """Evaluation point for equilibrium quantities"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    params: SystemParams
    beta: float = Field(..., gt=0, description="Inverse temperature")

    @classmethod
    def from_temperature(cls, params: SystemParams, temperature: float) -> "ThermoPoint":
        if temperature <= 0:
            raise ValueError("Temperature must be positive")
        return cls(params=params, beta=1.0 / (params.k_boltzmann * temperature))

    @property
    def temperature(self) -> float:
        return 1.0 / (self.params.k_boltzmann * self.beta)

    @property
    def beta_hbar_omega(self) -> float:
        return self.beta * self.params.hbar * self.params.omega

    def with_beta(self, beta: float) -> "ThermoPoint":
        return ThermoPoint(params=self.params, beta=beta)

    def with_params(self, **changes: Any) -> "ThermoPoint":
        return ThermoPoint(params=self.params.replace(**changes), beta=self.beta)


@dataclass(frozen=True)
class SubspaceDims:
    """Log-dimensions of the symmetric and antisymmetric spin subspaces"""
    sym_log_dim: float
    alt_log_dim: Optional[float]  # None marks the empty antisymmetric subspace

    @property
    def alt_empty(self) -> bool:
        return self.alt_log_dim is None
