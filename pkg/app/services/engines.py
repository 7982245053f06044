"""
Stirling (bias-driven) and Otto (frequency-switched) cycles with Hamiltonian-anyon working media
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit

from app.config import settings
from app.models.engine import (
    CycleResult,
    Medium,
    OttoHeatForm,
    OttoSpec,
    OttoSweepRow,
    Regime,
    StirlingLimits,
    StirlingMap,
    StirlingSpec,
)
from app.models.scan import AxisSpec, ScanParameter
from app.models.system import SystemParams, ThermoPoint
from app.models.validation import CycleSpecError, EmptyAntisymmetricSubspaceError, InfeasibleTargetError
from app.services.core import core_service
from app.services.scan_service import map_rows
from app.services.statmech import statmech_service

logger = logging.getLogger(__name__)


def classify_cycle(
    work: float, heat_hot: float, heat_cold: float, empty_subspace: bool = False
) -> CycleResult:
    """Attach the regime and the matching figure of merit to a work/heat triple.

    An engine needs both W > 0 and Q_H > 0; positive work drawn from a non-positive
    heat intake only arises from the literal Otto bookkeeping and is labelled neither.
    """
    tolerance = settings.REGIME_TOLERANCE
    if work > tolerance and heat_hot > tolerance:
        return CycleResult(
            work_cycle=work,
            heat_hot=heat_hot,
            heat_cold=heat_cold,
            regime=Regime.ENGINE,
            efficiency=work / heat_hot,
            empty_subspace=empty_subspace,
        )
    if work < -tolerance and heat_cold > 0:
        return CycleResult(
            work_cycle=work,
            heat_hot=heat_hot,
            heat_cold=heat_cold,
            regime=Regime.REFRIGERATOR,
            cop=heat_cold / abs(work),
            empty_subspace=empty_subspace,
        )
    return CycleResult(
        work_cycle=work,
        heat_hot=heat_hot,
        heat_cold=heat_cold,
        regime=Regime.NEITHER,
        empty_subspace=empty_subspace,
    )


def _stirling_map_row(args: Tuple[SystemParams, float, float, Sequence[float], float]) -> List[CycleResult]:
    params, beta_hot, beta_cold, nu_1_values, nu_2 = args
    return [
        engine_service.stirling_cycle(
            StirlingSpec(
                params=params, beta_hot=beta_hot, beta_cold=beta_cold, nu_1=float(nu_1), nu_2=nu_2
            )
        )
        for nu_1 in nu_1_values
    ]


class EngineService:
    """Work and heat bookkeeping for quasistatic Stirling and fast-switching Otto cycles"""

    # --- Stirling ------------------------------------------------------------------

    def isothermal_nu_work(
        self, beta: float, nu_initial: float, nu_final: float, params: SystemParams
    ) -> float:
        """Work extracted while nu is driven quasistatically at fixed beta: (1/beta) ln[p_F(nu_i)/p_F(nu_f)]"""
        if params.antisymmetric_empty:
            logger.warning(
                f"Isothermal stroke is workless: d={params.spin_dim} < N={params.n_particles}"
            )
            return 0.0
        if nu_initial == nu_final:
            return 0.0

        phi_initial = core_service.phi(ThermoPoint(params=params.replace(nu=nu_initial), beta=beta))
        phi_final = core_service.phi(ThermoPoint(params=params.replace(nu=nu_final), beta=beta))
        # ln p_F = -ln(1 + e^phi)
        return float(np.logaddexp(0.0, phi_final) - np.logaddexp(0.0, phi_initial)) / beta

    def _stirling_energy(self, spec: StirlingSpec, beta: float, nu: float) -> float:
        return statmech_service.internal_energy(
            ThermoPoint(params=spec.params.replace(nu=nu), beta=beta)
        )

    def stirling_cycle(self, spec: StirlingSpec) -> CycleResult:
        """Hot isotherm drives nu_2 -> nu_1, cold isotherm drives nu_1 -> nu_2"""
        params = spec.params
        work_hot = self.isothermal_nu_work(spec.beta_hot, spec.nu_2, spec.nu_1, params)
        work_cold = self.isothermal_nu_work(spec.beta_cold, spec.nu_1, spec.nu_2, params)
        work = work_hot + work_cold

        heat_hot = (
            self._stirling_energy(spec, spec.beta_hot, spec.nu_1)
            - self._stirling_energy(spec, spec.beta_cold, spec.nu_2)
            + work_hot
        )
        return classify_cycle(work, heat_hot, work - heat_hot, params.antisymmetric_empty)

    def stirling_cold_heat_oracle(self, spec: StirlingSpec) -> float:
        """Heat from the cold bath summed stroke by stroke (cool-down at nu_1, then the cold isotherm)"""
        work_cold = self.isothermal_nu_work(spec.beta_cold, spec.nu_1, spec.nu_2, spec.params)
        return (
            self._stirling_energy(spec, spec.beta_cold, spec.nu_2)
            - self._stirling_energy(spec, spec.beta_hot, spec.nu_1)
            + work_cold
        )

    def limiting_work(self, params: SystemParams, beta_hot: float, beta_cold: float) -> float:
        """Cycle work for complete fermionization and bosonization: (1/beta_H - 1/beta_C) h(d, N)"""
        h = core_service.h_of(params.spin_dim, params.n_particles)
        return (1.0 / beta_hot - 1.0 / beta_cold) * h

    def stirling_limits(self, spec: StirlingSpec) -> StirlingLimits:
        params = spec.params
        h = core_service.h_of(params.spin_dim, params.n_particles)
        _, u_bose_hot = statmech_service.internal_energy_branches(
            ThermoPoint(params=params, beta=spec.beta_hot)
        )
        _, u_bose_cold = statmech_service.internal_energy_branches(
            ThermoPoint(params=params, beta=spec.beta_cold)
        )
        w_limit = self.limiting_work(params, spec.beta_hot, spec.beta_cold)
        # ground terms cancel, leaving the two thermal sums
        q_hot_limit = h / spec.beta_hot + (u_bose_hot - u_bose_cold)
        return StirlingLimits(w_limit=w_limit, q_hot_limit=q_hot_limit, eta_limit=w_limit / q_hot_limit)

    def free_energy_nu_slope(self, point: ThermoPoint) -> float:
        """dF/dnu = p_F e^phi = 1 - p_F"""
        if point.params.antisymmetric_empty:
            return 0.0
        return float(expit(core_service.phi(point)))

    def free_energy_cross_slope(self, point: ThermoPoint) -> float:
        """d2F/(dbeta dnu) = (N(N-1)/2 hbar omega - nu) p_F (1 - p_F)"""
        if point.params.antisymmetric_empty:
            return 0.0
        phi = core_service.phi(point)
        gap = point.params.pauli_energy - point.params.nu
        return float(gap * expit(-phi) * expit(phi))

    def work_sign_threshold(self, params: SystemParams) -> float:
        """Bias below which bosonizing on the hot isotherm extracts work"""
        return params.pauli_energy

    def stirling_map(
        self,
        params: SystemParams,
        beta_hot: float,
        beta_cold: float,
        nu_1_axis: AxisSpec,
        nu_2_axis: AxisSpec,
        jobs: int = 1,
    ) -> StirlingMap:
        """Stirling performance over a nu_1 x nu_2 grid"""
        if not 0 < beta_hot < beta_cold:
            raise CycleSpecError(f"need 0 < beta_hot < beta_cold, got beta_hot={beta_hot}, beta_cold={beta_cold}")
        for axis in (nu_1_axis, nu_2_axis):
            if axis.parameter != ScanParameter.NU:
                raise CycleSpecError(f"Stirling map axes run over nu, got {axis.parameter.value}")

        nu_1_values = nu_1_axis.values()
        nu_2_values = nu_2_axis.values()
        rows = map_rows(
            _stirling_map_row,
            [(params, beta_hot, beta_cold, nu_1_values.tolist(), float(nu_2)) for nu_2 in nu_2_values],
            jobs,
        )

        def matrix(getter) -> np.ndarray:
            return np.array([[getter(cell) for cell in row] for row in rows], dtype=float)

        def performance(cell: CycleResult) -> float:
            if cell.regime == Regime.ENGINE:
                return cell.efficiency
            if cell.regime == Regime.REFRIGERATOR:
                return cell.cop
            return 0.0

        engines = sum(cell.regime == Regime.ENGINE for row in rows for cell in row)
        logger.info(f"Stirling map: {engines} of {nu_1_values.size * nu_2_values.size} cells run as engines")
        return StirlingMap(
            nu_1_values=nu_1_values,
            nu_2_values=nu_2_values,
            work=matrix(lambda c: c.work_cycle),
            heat_hot=matrix(lambda c: c.heat_hot),
            heat_cold=matrix(lambda c: c.heat_cold),
            performance=matrix(performance),
            regime=np.array([[cell.regime.value for cell in row] for row in rows], dtype=object),
        )

    # --- Otto ----------------------------------------------------------------------

    def medium_energy(
        self, params: SystemParams, beta: float, medium: Medium, k_fermi: Optional[float] = None
    ) -> float:
        """Internal energy U(beta, omega) of the selected working medium"""
        point = ThermoPoint(params=params, beta=beta)
        medium = Medium(medium)
        if medium == Medium.HAMILTONIAN_ANYON:
            return statmech_service.internal_energy(point)
        if medium == Medium.STATISTICAL:
            _, energy = statmech_service.statistical_anyon_props(point, k_fermi)
            return energy
        u_fermi, u_bose = statmech_service.internal_energy_branches(point)
        return u_fermi if medium == Medium.FERMION else u_bose

    def _otto_energies(self, spec: OttoSpec, omega_cold: float) -> Tuple[float, float]:
        u_hot = self.medium_energy(
            spec.params.replace(omega=spec.omega_1), spec.beta_hot, spec.medium, spec.k_fermi
        )
        u_cold = self.medium_energy(
            spec.params.replace(omega=omega_cold), spec.beta_cold, spec.medium, spec.k_fermi
        )
        return u_hot, u_cold

    def otto_cycle(self, spec: OttoSpec, heat_form: Optional[OttoHeatForm] = None) -> CycleResult:
        """Hot bath at omega_1, fast expansion to omega_2, cold bath, fast compression back"""
        heat_form = OttoHeatForm(heat_form or settings.OTTO_HEAT_FORM)
        ratio = spec.omega_1 / spec.omega_2
        u_hot, u_cold = self._otto_energies(spec, spec.omega_2)

        work = (1.0 - 1.0 / ratio) * u_hot - (ratio - 1.0) * u_cold
        if heat_form == OttoHeatForm.NARRATIVE:
            heat_hot = u_hot - ratio * u_cold
        else:
            _, u_cold_compressed = self._otto_energies(spec, spec.omega_1)
            heat_hot = u_hot - ratio * u_cold_compressed
        return classify_cycle(work, heat_hot, work - heat_hot, spec.params.antisymmetric_empty)

    def otto_cold_heat_oracle(self, spec: OttoSpec) -> float:
        """Heat from the cold bath after the fast expansion: U(beta_C, omega_2) - (omega_2/omega_1) U(beta_H, omega_1)"""
        u_hot, u_cold = self._otto_energies(spec, spec.omega_2)
        return u_cold - (spec.omega_2 / spec.omega_1) * u_hot

    def omega_from_phi_target(self, beta: float, phi_target: float, params: SystemParams) -> float:
        """omega = (phi + beta nu + h) / (N(N-1)/2 beta hbar)"""
        if params.antisymmetric_empty:
            raise EmptyAntisymmetricSubspaceError(params.spin_dim, params.n_particles)
        if params.pair_count == 0:
            raise InfeasibleTargetError("phi does not depend on omega for a single particle")

        h = core_service.h_of(params.spin_dim, params.n_particles)
        omega = (phi_target + beta * params.nu + h) / (params.pair_count * beta * params.hbar)
        if omega <= 0:
            raise InfeasibleTargetError(f"phi target {phi_target} needs non-positive omega {omega}")
        return omega

    def otto_sweep(
        self,
        n_values: Sequence[int],
        beta_ratio: float = 2.0,
        phi_hot: float = -0.1,
        phi_cold: float = 0.1,
        media: Sequence[Medium] = (Medium.HAMILTONIAN_ANYON, Medium.FERMION, Medium.BOSON),
        beta_hot: float = 1.0,
        k_fermi: float = 0.5,
        heat_form: Optional[OttoHeatForm] = None,
    ) -> List[OttoSweepRow]:
        """Otto performance against N with d = N and frequencies fixed by phi targets"""
        beta_cold = beta_ratio * beta_hot
        rows: List[OttoSweepRow] = []
        for n in n_values:
            n = int(n)
            base = SystemParams(n_particles=n, spin_dim=n, omega=1.0, nu=0.0)
            omega_1 = self.omega_from_phi_target(beta_hot, phi_hot, base)
            omega_2 = self.omega_from_phi_target(beta_cold, phi_cold, base)
            for medium in media:
                medium = Medium(medium)
                spec = OttoSpec(
                    params=base,
                    beta_hot=beta_hot,
                    beta_cold=beta_cold,
                    omega_1=omega_1,
                    omega_2=omega_2,
                    medium=medium,
                    k_fermi=k_fermi if medium == Medium.STATISTICAL else None,
                )
                result = self.otto_cycle(spec, heat_form)
                rows.append(
                    OttoSweepRow(
                        n_particles=n,
                        medium=medium,
                        omega_1=omega_1,
                        omega_2=omega_2,
                        work_cycle=result.work_cycle,
                        work_per_particle=result.work_cycle * beta_hot / n,
                        efficiency=result.efficiency,
                        regime=result.regime,
                    )
                )
        logger.info(f"Otto sweep finished: {len(rows)} rows")
        return rows


engine_service = EngineService()
