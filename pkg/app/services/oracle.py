"""
Brute-force cross-checks: explicit trap spectra, permutation-character dimension
counts and the eigenstate-counting qubit estimate.
"""
import itertools
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from app.config import settings
from app.models.oracle import EnumeratedSpectrum, QubitReport, SpectrumSymmetry, SpinSymmetry
from app.models.system import FreeParameter, SystemParams, ThermoPoint
from app.models.validation import EmptyAntisymmetricSubspaceError, EnumerationGuardError
from app.services.statmech import statmech_service
from app.services.transitions import transition_service

logger = logging.getLogger(__name__)

MAX_SPECTRUM_PARTICLES = 6
MAX_CHARACTER_SIZE = 8
MAX_QUBIT_PARTICLES = 4


def _cycle_count(permutation: Tuple[int, ...]) -> int:
    seen = [False] * len(permutation)
    cycles = 0
    for start in range(len(permutation)):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = permutation[j]
    return cycles


class OracleService:
    """Exhaustive enumerations used to verify the closed forms"""

    def level_cutoff(
        self,
        n_particles: int,
        beta_hbar_omega: float,
        tail_tolerance: float,
        symmetry: SpectrumSymmetry = SpectrumSymmetry.BOSONIC,
    ) -> int:
        """Smallest L with N e^{-x(L+1)} / (1 - e^{-x}) < tail_tolerance.

        Fermionic cutoffs are shifted up by the N - 1 levels of the Fermi sea.
        """
        x = beta_hbar_omega
        bound = math.log(n_particles / (tail_tolerance * -math.expm1(-x))) / x
        cutoff = max(int(math.ceil(bound)) - 1, 0)
        while n_particles * math.exp(-x * (cutoff + 1)) / -math.expm1(-x) >= tail_tolerance:
            cutoff += 1
        if SpectrumSymmetry(symmetry) == SpectrumSymmetry.FERMIONIC:
            cutoff += n_particles - 1
        return cutoff

    def enumerate_spectrum(
        self,
        symmetry: SpectrumSymmetry,
        n_particles: int,
        beta_hbar_omega: float = 1.0,
        tail_tolerance: Optional[float] = None,
        level_cutoff: Optional[int] = None,
    ) -> EnumeratedSpectrum:
        """All occupation configurations with levels 0..L, energies in units of hbar*omega"""
        symmetry = SpectrumSymmetry(symmetry)
        if n_particles < 1 or n_particles > MAX_SPECTRUM_PARTICLES:
            raise EnumerationGuardError(
                f"spectrum enumeration supports 1 <= N <= {MAX_SPECTRUM_PARTICLES}, got {n_particles}"
            )
        tail_tolerance = settings.ORACLE_TAIL_TOLERANCE if tail_tolerance is None else tail_tolerance
        if tail_tolerance <= 0:
            raise ValueError("tail_tolerance must be positive")
        if level_cutoff is None:
            level_cutoff = self.level_cutoff(n_particles, beta_hbar_omega, tail_tolerance, symmetry)

        levels = level_cutoff + 1
        if symmetry == SpectrumSymmetry.FERMIONIC:
            count = math.comb(levels, n_particles)
            combos = itertools.combinations(range(levels), n_particles)
        else:
            count = math.comb(levels + n_particles - 1, n_particles)
            combos = itertools.combinations_with_replacement(range(levels), n_particles)
        if count > settings.ORACLE_MAX_CONFIGURATIONS:
            raise EnumerationGuardError(
                f"{count} configurations exceed the limit of {settings.ORACLE_MAX_CONFIGURATIONS}"
            )
        if count == 0:
            raise EnumerationGuardError(f"cutoff {level_cutoff} leaves no room for {n_particles} fermions")

        configurations = np.fromiter(
            itertools.chain.from_iterable(combos), dtype=np.int64, count=count * n_particles
        ).reshape(count, n_particles)
        energies = configurations.sum(axis=1) + 0.5 * n_particles

        logger.info(
            f"Enumerated {count} {symmetry.value} configurations (N={n_particles}, L={level_cutoff})"
        )
        return EnumeratedSpectrum(
            symmetry=symmetry,
            n_particles=n_particles,
            level_cutoff=level_cutoff,
            configurations=configurations,
            energies=energies.astype(float),
        )

    def ln_partition(self, spectrum: EnumeratedSpectrum, beta_hbar_omega: float) -> float:
        return float(logsumexp(-beta_hbar_omega * spectrum.energies))

    def internal_energy(self, spectrum: EnumeratedSpectrum, beta_hbar_omega: float) -> float:
        """Thermal mean energy in units of hbar*omega"""
        shifted = -beta_hbar_omega * (spectrum.energies - spectrum.ground_energy)
        weights = np.exp(shifted)
        return float(np.sum(spectrum.energies * weights) / np.sum(weights))

    def character_dimension(self, spin_dim: int, n_particles: int, symmetry: SpinSymmetry) -> int:
        """(1/N!) sum over S_N of sign^alt * d^cycles"""
        symmetry = SpinSymmetry(symmetry)
        if not 1 <= n_particles <= MAX_CHARACTER_SIZE or not 1 <= spin_dim <= MAX_CHARACTER_SIZE:
            raise EnumerationGuardError(
                f"character sums support d, N <= {MAX_CHARACTER_SIZE}, got d={spin_dim}, N={n_particles}"
            )

        total = 0
        for permutation in itertools.permutations(range(n_particles)):
            cycles = _cycle_count(permutation)
            term = spin_dim ** cycles
            if symmetry == SpinSymmetry.ALT and (n_particles - cycles) % 2:
                term = -term
            total += term

        dimension, remainder = divmod(total, math.factorial(n_particles))
        if remainder:
            raise ArithmeticError(f"character sum {total} is not divisible by {n_particles}!")
        return dimension

    def qubit_requirement(
        self,
        params: SystemParams,
        temperature: float,
        coverage: float = 0.999,
        tail_tolerance: float = 1e-9,
    ) -> QubitReport:
        """Eigenstates (and qubits) needed to hold `coverage` of the mixture population at p_F = 1/2"""
        if not 0.0 < coverage < 1.0:
            raise ValueError("coverage must lie in (0, 1)")
        if params.n_particles > MAX_QUBIT_PARTICLES:
            raise EnumerationGuardError(
                f"qubit estimate supports N <= {MAX_QUBIT_PARTICLES}, got {params.n_particles}"
            )
        if params.antisymmetric_empty:
            raise EmptyAntisymmetricSubspaceError(params.spin_dim, params.n_particles)

        point = ThermoPoint.from_temperature(params, temperature)
        tuned = transition_service.transition_point(point, FreeParameter.NU)
        p_fermi, p_bose = statmech_service.reduced_state_weights(tuned)
        x = tuned.beta_hbar_omega

        entries: List[Tuple[float, int, Tuple[int, ...]]] = []
        for branch, (symmetry, weight) in enumerate(
            ((SpectrumSymmetry.FERMIONIC, p_fermi), (SpectrumSymmetry.BOSONIC, p_bose))
        ):
            spectrum = self.enumerate_spectrum(symmetry, params.n_particles, x, tail_tolerance)
            boltzmann = np.exp(-x * (spectrum.energies - spectrum.ground_energy))
            populations = weight * boltzmann / boltzmann.sum()
            for population, config in zip(populations, spectrum.configurations):
                entries.append((-float(population), branch, tuple(int(n) for n in config)))

        entries.sort()
        cumulative = np.cumsum([-entry[0] for entry in entries])
        num_states = int(np.searchsorted(cumulative, coverage, side="left")) + 1
        num_states = min(num_states, len(entries))

        report = QubitReport(
            temperature=temperature,
            nu_used=tuned.params.nu,
            coverage=coverage,
            num_states=num_states,
            num_qubits=(num_states - 1).bit_length(),
            covered_population=float(cumulative[num_states - 1]),
        )
        logger.info(f"T={temperature:g}: {report.num_states} states, {report.num_qubits} qubits")
        return report


oracle_service = OracleService()
