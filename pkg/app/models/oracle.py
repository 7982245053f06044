from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict

import numpy as np


class SpectrumSymmetry(str, Enum):
    FERMIONIC = "fermionic"
    BOSONIC = "bosonic"


class SpinSymmetry(str, Enum):
    SYM = "sym"
    ALT = "alt"


@dataclass
class EnumeratedSpectrum:
    """Exhaustive N-particle spectrum of the trap below a level cutoff.

    Energies are in units of hbar*omega: sum of levels plus N/2.
    """
    symmetry: SpectrumSymmetry
    n_particles: int
    level_cutoff: int
    configurations: np.ndarray  # one row of occupied levels per configuration
    energies: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.energies.min())


@dataclass(frozen=True)
class QubitReport:
    """Number of eigenstates (and qubits) covering a population threshold"""
    temperature: float
    nu_used: float
    coverage: float
    num_states: int
    num_qubits: int
    covered_population: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "temperature": self.temperature,
            "nu_used": self.nu_used,
            "coverage": self.coverage,
            "num_states": self.num_states,
            "num_qubits": self.num_qubits,
            "covered_population": self.covered_population,
        }


@dataclass
class CheckResult:
    """Outcome of one verification check"""
    name: str
    passed: bool
    detail: str = ""
    elapsed_ms: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)
