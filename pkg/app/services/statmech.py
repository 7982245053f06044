"""
Closed-form equilibrium thermodynamics of N trapped Hamiltonian anyons.

All partition-function algebra happens in log space. The fermionic weight is
the logistic of -phi; derivatives are analytic and are checked against finite
differences in the test suite.
"""
import logging
import math
from typing import Tuple

import numpy as np
from scipy.special import expit, logsumexp

from app.models.system import ThermoPoint
from app.models.thermo import CapacityReport, PfDerivatives, ThermoProps
from app.services.core import core_service

logger = logging.getLogger(__name__)

_LN2 = math.log(2.0)


def _log1mexp(y: np.ndarray) -> np.ndarray:
    """ln(1 - e^{-y}) for y > 0"""
    return np.where(
        y < _LN2,
        np.log(-np.expm1(-np.minimum(y, _LN2))),
        np.log1p(-np.exp(-np.maximum(y, _LN2))),
    )


def _levels(n_particles: int) -> np.ndarray:
    return np.arange(1, n_particles + 1, dtype=float)


class StatMechService:
    """Partition functions, fermionic weight, internal energies and their derivatives"""

    # --- partition functions -------------------------------------------------

    def ln_partition_fermi(self, point: ThermoPoint) -> float:
        n = point.params.n_particles
        x = point.beta_hbar_omega
        return float(-0.5 * x * n * n - np.sum(_log1mexp(x * _levels(n))))

    def ln_partition_bose(self, point: ThermoPoint) -> float:
        n = point.params.n_particles
        x = point.beta_hbar_omega
        return float(-0.5 * x * n - np.sum(_log1mexp(x * _levels(n))))

    def ln_partition_total(self, point: ThermoPoint) -> float:
        """ln of C(d+N-1,N) Z_F + C(d,N) e^{-beta nu} Z_B"""
        params = point.params
        dims = core_service.subspace_dims(params.spin_dim, params.n_particles)
        fermi_term = dims.sym_log_dim + self.ln_partition_fermi(point)
        if dims.alt_empty:
            return fermi_term
        bose_term = dims.alt_log_dim - point.beta * params.nu + self.ln_partition_bose(point)
        return float(logsumexp([fermi_term, bose_term]))

    def free_energy(self, point: ThermoPoint) -> float:
        """F = -ln Z / beta"""
        return -self.ln_partition_total(point) / point.beta

    # --- fermionic weight ------------------------------------------------------

    def fermionic_weight(self, point: ThermoPoint) -> float:
        if point.params.antisymmetric_empty:
            return 1.0
        return float(expit(-core_service.phi(point)))

    def reduced_state_weights(self, point: ThermoPoint) -> Tuple[float, float]:
        """Mixture weights (p_F, 1 - p_F) of the reduced spatial thermal state"""
        if point.params.antisymmetric_empty:
            return 1.0, 0.0
        phi = core_service.phi(point)
        return float(expit(-phi)), float(expit(phi))

    def _weight_terms(self, point: ThermoPoint) -> Tuple[float, float, float, float]:
        """(p_F, 1 - p_F, p_F(1 - p_F), 1 - 2 p_F); the pure-fermionic branch gives (1, 0, 0, -1)"""
        if point.params.antisymmetric_empty:
            return 1.0, 0.0, 0.0, -1.0
        phi = core_service.phi(point)
        p = float(expit(-phi))
        q = float(expit(phi))
        return p, q, p * q, math.tanh(0.5 * phi)

    # --- internal energy -------------------------------------------------------

    def _thermal_sum(self, point: ThermoPoint) -> float:
        """sum_k k*hbar*omega / (e^{k beta hbar omega} - 1)"""
        hw = point.params.hbar * point.params.omega
        k = _levels(point.params.n_particles)
        y = point.beta_hbar_omega * k
        return float(hw * np.sum(k * np.exp(-y) / -np.expm1(-y)))

    def internal_energy_branches(self, point: ThermoPoint) -> Tuple[float, float]:
        """(U_F, U_B): the two branches differ only in the ground-state term"""
        n = point.params.n_particles
        hw = point.params.hbar * point.params.omega
        thermal = self._thermal_sum(point)
        return 0.5 * hw * n * n + thermal, 0.5 * hw * n + thermal

    def internal_energy(self, point: ThermoPoint) -> float:
        """U = p_F U_F + (1 - p_F)(nu + U_B)"""
        u_fermi, u_bose = self.internal_energy_branches(point)
        p, q = self.reduced_state_weights(point)
        return p * u_fermi + q * (point.params.nu + u_bose)

    def thermo_props(self, point: ThermoPoint) -> ThermoProps:
        u_fermi, u_bose = self.internal_energy_branches(point)
        p, q = self.reduced_state_weights(point)
        return ThermoProps(
            ln_z_fermi=self.ln_partition_fermi(point),
            ln_z_bose=self.ln_partition_bose(point),
            ln_z_total=self.ln_partition_total(point),
            p_fermi=p,
            u_fermi=u_fermi,
            u_bose=u_bose,
            u_total=p * u_fermi + q * (point.params.nu + u_bose),
        )

    # --- statistical anyons ----------------------------------------------------

    def statistical_anyon_props(self, point: ThermoPoint, k_fermi: float) -> Tuple[float, float]:
        """(ln Z, U) of the ensemble with a fixed fermionic fraction k_F"""
        if not 0.0 <= k_fermi <= 1.0:
            raise ValueError(f"k_fermi must lie in [0, 1], got {k_fermi}")
        u_fermi, u_bose = self.internal_energy_branches(point)
        ln_z = k_fermi * self.ln_partition_fermi(point) + (1 - k_fermi) * self.ln_partition_bose(point)
        return ln_z, k_fermi * u_fermi + (1 - k_fermi) * u_bose

    def branch_heat_capacity(self, point: ThermoPoint) -> float:
        """dU/dT of either pure branch (fermions and bosons share it)"""
        u_b_beta, _, _, _ = self._bose_derivatives(point)
        return -point.params.k_boltzmann * point.beta ** 2 * u_b_beta

    def statistical_anyon_capacity(self, point: ThermoPoint, k_fermi: float) -> float:
        if not 0.0 <= k_fermi <= 1.0:
            raise ValueError(f"k_fermi must lie in [0, 1], got {k_fermi}")
        c_branch = self.branch_heat_capacity(point)
        return k_fermi * c_branch + (1 - k_fermi) * c_branch

    # --- derivatives -------------------------------------------------------------

    def _bose_derivatives(self, point: ThermoPoint) -> Tuple[float, float, float, float]:
        """dU_B/dbeta, d2U_B/dbeta2, dU_B/domega, d2U_B/domega2"""
        params = point.params
        hbar = params.hbar
        hw = hbar * params.omega
        k = _levels(params.n_particles)
        y = point.beta_hbar_omega * k
        e = np.exp(-y)
        q = -np.expm1(-y)
        occupation = e / q
        f = e / q ** 2
        g3 = e * (1 + e) / q ** 3

        d_beta = -np.sum((hw * k) ** 2 * f)
        d2_beta = np.sum((hw * k) ** 3 * g3)
        d_omega = 0.5 * hbar * params.n_particles + np.sum(k * hbar * (occupation - y * f))
        d2_omega = np.sum(k ** 2 * point.beta * hbar ** 2 * (y * g3 - 2 * f))
        return float(d_beta), float(d2_beta), float(d_omega), float(d2_omega)

    def pf_derivatives(self, point: ThermoPoint) -> PfDerivatives:
        """First and second derivatives of p_F in beta, nu and omega"""
        params = point.params
        p, q, spread, tilt = self._weight_terms(point)
        gap = params.pauli_energy - params.nu
        phi_beta = gap
        phi_nu = -point.beta
        phi_omega = point.beta * params.hbar * params.pair_count
        return PfDerivatives(
            d_beta=-spread * phi_beta,
            d_nu=-spread * phi_nu,
            d_omega=-spread * phi_omega,
            d2_beta=tilt * spread * phi_beta ** 2,
            d2_nu=tilt * spread * phi_nu ** 2,
            d2_omega=tilt * spread * phi_omega ** 2,
        )

    def capacities(self, point: ThermoPoint) -> CapacityReport:
        """Analytic dU/dX and d2U/dX2 for X in (T, nu, omega)"""
        params = point.params
        beta = point.beta
        k_b = params.k_boltzmann
        hbar_pairs = params.hbar * params.pair_count
        p, q, spread, tilt = self._weight_terms(point)
        gap = params.pauli_energy - params.nu

        u_b_beta, u_b_beta2, u_b_omega, u_b_omega2 = self._bose_derivatives(point)
        u_beta = u_b_beta - spread * gap ** 2
        u_beta2 = u_b_beta2 + tilt * spread * gap ** 3

        return CapacityReport(
            c_temp=-k_b * beta ** 2 * u_beta,
            c_nu=q + spread * beta * gap,
            c_omega=u_b_omega + p * hbar_pairs - spread * beta * hbar_pairs * gap,
            d2_temp=k_b ** 2 * beta ** 3 * (2 * u_beta + beta * u_beta2),
            d2_nu=tilt * spread * beta ** 2 * gap - 2 * spread * beta,
            d2_omega=(
                u_b_omega2
                + tilt * spread * beta ** 2 * hbar_pairs ** 2 * gap
                - 2 * spread * beta * hbar_pairs ** 2
            ),
        )

    def capacities_near_transition(self, point: ThermoPoint, epsilon: float) -> CapacityReport:
        """Capacities at nu = N(N-1)/2 hbar omega - (h + epsilon)/beta, i.e. at phi = epsilon"""
        params = point.params
        h = core_service.h_of(params.spin_dim, params.n_particles)
        nu = params.pauli_energy - (h + epsilon) / point.beta
        return self.capacities(point.with_params(nu=nu))


statmech_service = StatMechService()
