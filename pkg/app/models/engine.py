from dataclasses import dataclass, asdict
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.system import SystemParams


class Medium(str, Enum):
    HAMILTONIAN_ANYON = "hamiltonian_anyon"
    FERMION = "fermion"
    BOSON = "boson"
    STATISTICAL = "statistical"


class Regime(str, Enum):
    ENGINE = "engine"
    REFRIGERATOR = "refrigerator"
    NEITHER = "neither"


class OttoHeatForm(str, Enum):
    NARRATIVE = "narrative"  # heating starts from the compressed cold state
    LITERAL = "literal"      # second term evaluated at (beta_cold, omega_1)


class StirlingSpec(BaseModel):
    """Bias-driven Stirling cycle between two baths at fixed trap frequency.

    The hot isotherm drives the bias from nu_2 to nu_1 and the cold isotherm
    drives it back from nu_1 to nu_2.
    """
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    params: SystemParams
    beta_hot: float = Field(..., gt=0)
    beta_cold: float = Field(..., gt=0)
    nu_1: float
    nu_2: float

    @model_validator(mode="after")
    def check_baths(self) -> "StirlingSpec":
        if not self.beta_hot < self.beta_cold:
            raise ValueError("beta_hot must be smaller than beta_cold")
        return self


class OttoSpec(BaseModel):
    """Frequency-switched Otto cycle at zero symmetry bias"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    params: SystemParams
    beta_hot: float = Field(..., gt=0)
    beta_cold: float = Field(..., gt=0)
    omega_1: float = Field(..., gt=0, description="Compressed trap frequency")
    omega_2: float = Field(..., gt=0, description="Expanded trap frequency")
    medium: Medium = Medium.HAMILTONIAN_ANYON
    k_fermi: Optional[float] = Field(default=None, ge=0, le=1)

    @model_validator(mode="after")
    def check_cycle(self) -> "OttoSpec":
        if self.params.nu != 0:
            raise ValueError("the Otto cycle runs at nu = 0")
        if not self.beta_hot < self.beta_cold:
            raise ValueError("beta_hot must be smaller than beta_cold")
        # omega_1 == omega_2 is the degenerate workless cycle
        if self.omega_2 > self.omega_1:
            raise ValueError("omega_2 must not exceed omega_1")
        if (self.medium == Medium.STATISTICAL) != (self.k_fermi is not None):
            raise ValueError("k_fermi is required for, and only for, the statistical medium")
        return self


@dataclass(frozen=True)
class CycleResult:
    """Work and heat bookkeeping of one closed cycle"""
    work_cycle: float
    heat_hot: float
    heat_cold: float
    regime: Regime
    efficiency: Optional[float] = None
    cop: Optional[float] = None
    empty_subspace: bool = False

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["regime"] = self.regime.value
        return data


@dataclass(frozen=True)
class StirlingLimits:
    """Complete-fermionization/bosonization limits of the Stirling cycle"""
    w_limit: float
    q_hot_limit: float
    eta_limit: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class OttoSweepRow:
    """Otto performance for one particle number and one medium"""
    n_particles: int
    medium: Medium
    omega_1: float
    omega_2: float
    work_cycle: float
    work_per_particle: float  # W_cyc / (N k_B T_H)
    efficiency: Optional[float]
    regime: Regime


@dataclass
class StirlingMap:
    """Stirling performance over a nu_1 x nu_2 grid (rows follow nu_2)"""
    nu_1_values: np.ndarray
    nu_2_values: np.ndarray
    work: np.ndarray
    heat_hot: np.ndarray
    heat_cold: np.ndarray
    performance: np.ndarray  # efficiency for engines, COP for refrigerators, 0 otherwise
    regime: np.ndarray
