"""
Location and characterization of the fermion-boson transition (phi = 0)
"""
import logging
import math
import sys
from typing import Callable, Optional, Tuple

from scipy.optimize import bisect

from app.config import settings
from app.models.system import FreeParameter, SystemParams, ThermoPoint
from app.models.thermo import AsymptoticCapacities, SpinDimensionRule
from app.models.validation import EmptyAntisymmetricSubspaceError, NoBracketError
from app.services.core import core_service
from app.services.statmech import statmech_service

logger = logging.getLogger(__name__)

_MAX_EXPANSIONS = 1100
_RTOL = 4 * sys.float_info.epsilon


def _point_with(point: ThermoPoint, free: FreeParameter, value: float) -> ThermoPoint:
    if free == FreeParameter.BETA:
        return point.with_beta(value)
    if free == FreeParameter.OMEGA:
        return point.with_params(omega=value)
    return point.with_params(nu=value)


def _straddles(a: float, b: float) -> bool:
    return (a <= 0.0 <= b) or (b <= 0.0 <= a)


def _current_value(point: ThermoPoint, free: FreeParameter) -> float:
    if free == FreeParameter.BETA:
        return point.beta
    if free == FreeParameter.OMEGA:
        return point.params.omega
    return point.params.nu


class TransitionService:
    """Root finding for phi = 0 and the diagnostics evaluated there"""

    def _expand_bracket(
        self, phi_of: Callable[[float], float], guess: float, positive: bool
    ) -> Tuple[float, float]:
        """Grow an interval around the guess until phi changes sign"""
        if positive:
            lo, hi = guess, guess
            for _ in range(_MAX_EXPANSIONS):
                if _straddles(phi_of(lo), phi_of(hi)):
                    return lo, hi
                lo, hi = 0.5 * lo, 2.0 * hi
                if lo == 0.0 or math.isinf(hi):
                    break
        else:
            step = max(abs(guess), 1.0)
            for _ in range(_MAX_EXPANSIONS):
                lo, hi = guess - step, guess + step
                if _straddles(phi_of(lo), phi_of(hi)):
                    return lo, hi
                step *= 2.0
                if math.isinf(step):
                    break
        raise NoBracketError("phi keeps a constant sign over the admissible range")

    def solve_transition(self, point: ThermoPoint, free: FreeParameter) -> float:
        """Value of the free parameter at which phi = 0, by bracketing bisection"""
        free = FreeParameter(free)
        params = point.params
        if params.antisymmetric_empty:
            raise EmptyAntisymmetricSubspaceError(params.spin_dim, params.n_particles)

        def phi_of(value: float) -> float:
            return core_service.phi(_point_with(point, free, value))

        guess = _current_value(point, free)
        lo, hi = self._expand_bracket(phi_of, guess, positive=free != FreeParameter.NU)
        if lo == hi:
            return lo

        root = bisect(phi_of, lo, hi, xtol=1e-300, rtol=_RTOL, maxiter=5000)
        residual = abs(phi_of(root))
        if residual > settings.BISECTION_TOLERANCE:
            logger.warning(f"Transition in {free.value} has residual |phi| = {residual:.3e}")
        logger.info(f"Transition located: {free.value} = {root:.12g}")
        return float(root)

    def closed_form_transition(self, point: ThermoPoint, free: FreeParameter) -> float:
        """Rearranged phi = 0; used to cross-check the bisection"""
        free = FreeParameter(free)
        params = point.params
        h = core_service.h_of(params.spin_dim, params.n_particles)
        if free == FreeParameter.NU:
            return params.pauli_energy - h / point.beta

        if free == FreeParameter.BETA:
            gap = params.pauli_energy - params.nu
            if gap <= 0 or h <= 0:
                raise NoBracketError("no positive beta solves phi = 0")
            return h / gap

        numerator = point.beta * params.nu + h
        denominator = point.beta * params.hbar * params.pair_count
        if denominator <= 0 or numerator <= 0:
            raise NoBracketError("no positive omega solves phi = 0")
        return numerator / denominator

    def transition_point(self, point: ThermoPoint, free: FreeParameter) -> ThermoPoint:
        return _point_with(point, FreeParameter(free), self.solve_transition(point, free))

    def transition_width(self, point: ThermoPoint, free: FreeParameter) -> float:
        """1 / |dp_F/dX| at the midpoint"""
        free = FreeParameter(free)
        derivs = statmech_service.pf_derivatives(self.transition_point(point, free))
        slope = {
            FreeParameter.BETA: derivs.d_beta,
            FreeParameter.OMEGA: derivs.d_omega,
            FreeParameter.NU: derivs.d_nu,
        }[free]
        if slope == 0:
            return math.inf
        return 1.0 / abs(slope)

    def asymptotic_capacities(
        self,
        d_rule: SpinDimensionRule,
        n_particles: int,
        spin_dim: Optional[int] = None,
        beta: float = 1.0,
        omega: float = 1.0,
    ) -> AsymptoticCapacities:
        """C_T/N^2, C_nu/N^2 and C_omega/N^2 with nu tuned to the midpoint"""
        d_rule = SpinDimensionRule(d_rule)
        if d_rule == SpinDimensionRule.D_EQUALS_N:
            spin_dim = n_particles
        elif spin_dim is None:
            raise ValueError("d_fixed requires an explicit spin_dim")

        params = SystemParams(n_particles=n_particles, spin_dim=spin_dim, omega=omega)
        point = self.transition_point(ThermoPoint(params=params, beta=beta), FreeParameter.NU)
        report = statmech_service.capacities(point)
        h = core_service.h_of(spin_dim, n_particles)
        n_squared = float(n_particles) ** 2

        return AsymptoticCapacities(
            n_particles=n_particles,
            spin_dim=spin_dim,
            nu=point.params.nu,
            h=h,
            c_temp_density=report.c_temp / n_squared,
            c_nu_density=report.c_nu / n_squared,
            c_omega_density=report.c_omega / n_squared,
            reference_c_temp_density=params.k_boltzmann * h * h / (4 * n_squared),
        )


transition_service = TransitionService()
