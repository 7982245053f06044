"""
Pass/fail suite that cross-checks the closed forms against brute force,
finite differences and the known limiting results.
"""
import logging
import math
import sys
import time
from typing import Callable, Dict, List, Tuple

import numpy as np

from app.models.engine import Medium, OttoHeatForm, OttoSpec, Regime, StirlingSpec
from app.models.oracle import CheckResult, SpectrumSymmetry, SpinSymmetry
from app.models.scan import AxisSpec, GridScanRequest, ScanQuantity
from app.models.system import FreeParameter, SystemParams, ThermoPoint
from app.models.thermo import SpinDimensionRule
from app.repositories.document_repository import DocumentRepository
from app.services.core import core_service
from app.services.engines import engine_service
from app.services.oracle import oracle_service
from app.services.report_builder import report_builder
from app.services.scan_service import scan_service
from app.services.statmech import statmech_service
from app.services.transitions import transition_service

logger = logging.getLogger(__name__)

EPS = sys.float_info.epsilon
FD_STEP_FACTOR = EPS ** (1.0 / 3.0)


def fd_step(x: float, scale: float = math.inf) -> float:
    """Central-difference step for a function of x that varies over the given scale"""
    return FD_STEP_FACTOR * min(max(abs(x), 1.0), scale)


def variation_scales(point: ThermoPoint) -> Dict[str, float]:
    """Distance in T, nu and omega over which U changes appreciably.

    Either the parameter itself or the width 1/|dphi/dx| of the fermion-boson crossover,
    whichever is shorter; at large N the crossover in omega is far narrower than omega.
    """
    params = point.params
    if params.antisymmetric_empty:
        return {"temp": point.temperature, "nu": math.inf, "omega": params.omega}

    beta = point.beta
    gap = abs(params.pauli_energy - params.nu)
    slopes = {
        "temp": params.k_boltzmann * beta * beta * gap,
        "nu": beta,
        "omega": beta * params.hbar * params.pair_count,
    }
    own = {"temp": point.temperature, "nu": math.inf, "omega": params.omega}
    return {name: min(own[name], 1.0 / slope if slope > 0 else math.inf) for name, slope in slopes.items()}


def random_capacity_point(rng: np.random.Generator, max_particles: int = 60) -> ThermoPoint:
    """Random evaluation point with |phi| <= 4 and a transition wider than the difference step"""
    while True:
        n = int(rng.integers(1, max_particles + 1))
        d = int(rng.integers(n, n + 6))
        nu = float(rng.uniform(-3.0, 3.0))
        pairs = 0.5 * n * (n - 1)
        beta_max = min(5.0, 300.0 / max(pairs, 1.0))
        beta = float(np.exp(rng.uniform(np.log(0.05), np.log(beta_max))))
        if pairs == 0:
            omega = float(rng.uniform(0.2, 5.0))
        else:
            phi_target = float(rng.uniform(-4.0, 4.0))
            omega = (phi_target + beta * nu + core_service.h_of(d, n)) / (beta * pairs)
            if omega <= 1e-3:
                continue
        params = SystemParams(n_particles=n, spin_dim=d, omega=omega, nu=nu)
        return ThermoPoint(params=params, beta=beta)


def capacity_mismatches(point: ThermoPoint, rtol_far: float = 1e-6, rtol_near: float = 1e-4) -> List[str]:
    """Compare every CapacityReport entry with central differences; returns the failing entries"""
    params = point.params
    phi = 0.0 if params.antisymmetric_empty else core_service.phi(point)
    rtol = rtol_near if abs(phi) < 0.5 else rtol_far
    report = statmech_service.capacities(point)
    temperature = point.temperature

    def at_temperature(t: float) -> ThermoPoint:
        return ThermoPoint.from_temperature(params, t)

    movers: List[Tuple[str, float, Callable[[float], ThermoPoint], float, float]] = [
        ("temp", temperature, at_temperature, report.c_temp, report.d2_temp),
        ("nu", params.nu, lambda v: point.with_params(nu=v), report.c_nu, report.d2_nu),
        ("omega", params.omega, lambda v: point.with_params(omega=v), report.c_omega, report.d2_omega),
    ]

    failures = []
    scales = variation_scales(point)
    u_scale = max(abs(statmech_service.internal_energy(point)), 1.0)
    for name, x, move, first, second in movers:
        h = fd_step(x, scales[name])
        u_plus = statmech_service.internal_energy(move(x + h))
        u_minus = statmech_service.internal_energy(move(x - h))
        fd_first = (u_plus - u_minus) / (2 * h)
        roundoff = 10 * EPS * u_scale / h
        if abs(fd_first - first) > rtol * abs(first) + roundoff:
            failures.append(f"c_{name}: analytic {first:.9e} vs fd {fd_first:.9e}")

        # second derivatives difference the analytic first derivative with step h/10
        h = 0.1 * h
        c_plus = getattr(statmech_service.capacities(move(x + h)), f"c_{name}")
        c_minus = getattr(statmech_service.capacities(move(x - h)), f"c_{name}")
        fd_second = (c_plus - c_minus) / (2 * h)
        floor = abs(first) / max(abs(x), 1.0)
        roundoff = 10 * EPS * max(abs(first), u_scale) / h
        if abs(fd_second - second) > rtol * max(abs(second), floor) + roundoff:
            failures.append(f"d2_{name}: analytic {second:.9e} vs fd {fd_second:.9e}")
    return failures


def random_stirling_spec(rng: np.random.Generator) -> StirlingSpec:
    n = int(rng.integers(1, 9))
    d = int(rng.integers(n, n + 4))
    beta_hot = float(rng.uniform(0.1, 2.0))
    beta_cold = beta_hot * float(rng.uniform(1.05, 2.5))
    params = SystemParams(n_particles=n, spin_dim=d, omega=float(rng.uniform(0.2, 2.0)))
    return StirlingSpec(
        params=params,
        beta_hot=beta_hot,
        beta_cold=beta_cold,
        nu_1=float(rng.uniform(-5.0, 5.0)),
        nu_2=float(rng.uniform(-5.0, 5.0)),
    )


def random_otto_spec(rng: np.random.Generator) -> OttoSpec:
    n = int(rng.integers(1, 9))
    d = int(rng.integers(max(n - 2, 1), n + 4))
    medium = Medium(rng.choice([m.value for m in Medium]))
    beta_hot = float(rng.uniform(0.1, 2.0))
    omega_1 = float(rng.uniform(0.5, 2.0))
    return OttoSpec(
        params=SystemParams(n_particles=n, spin_dim=d, omega=omega_1),
        beta_hot=beta_hot,
        beta_cold=beta_hot * float(rng.uniform(1.05, 2.5)),
        omega_1=omega_1,
        omega_2=omega_1 * float(rng.uniform(0.1, 1.0)),
        medium=medium,
        k_fermi=float(rng.uniform()) if medium == Medium.STATISTICAL else None,
    )


class VerificationService:
    """Runs every cross-check and reports a pass/fail table"""

    def __init__(self, seed: int = 20240611):
        self.seed = seed

    def run_all_checks(self) -> List[CheckResult]:
        checks = [
            ("Oracle equivalence", self.check_oracle_equivalence),
            ("Dimension formulas", self.check_dimension_formulas),
            ("Derivative fidelity", self.check_derivative_fidelity),
            ("Carnot limit", self.check_carnot_limit),
            ("First-law closure", self.check_first_law),
            ("Work sign law", self.check_work_sign_law),
            ("Otto advantage", self.check_otto_advantage),
            ("Transition diagnostics", self.check_transition_diagnostics),
            ("Midpoint slopes", self.check_midpoint_slopes),
            ("Heat-capacity crossover", self.check_capacity_crossover),
            ("Qubit staircase", self.check_qubit_staircase),
            ("Scan determinism", self.check_scan_determinism),
        ]

        results = []
        for name, check in checks:
            start = time.time()
            try:
                passed, detail = check()
            except Exception as e:
                logger.error(f"Check '{name}' raised: {e}")
                passed, detail = False, f"{type(e).__name__}: {e}"
            results.append(
                CheckResult(name=name, passed=passed, detail=detail, elapsed_ms=(time.time() - start) * 1000)
            )
        return results

    @staticmethod
    def print_report(results: List[CheckResult], stream=sys.stderr) -> None:
        print("🧪 Hamiltonian-anyon verification suite", file=stream)
        print("=" * 60, file=stream)
        for result in results:
            mark = "✅ PASSED" if result.passed else "❌ FAILED"
            print(f"{mark}: {result.name} ({result.elapsed_ms:.0f} ms) {result.detail}", file=stream)
        failed = sum(not r.passed for r in results)
        print("=" * 60, file=stream)
        print(f"📊 Results: {len(results) - failed} passed, {failed} failed", file=stream)

    # --- individual checks -----------------------------------------------------------

    def check_oracle_equivalence(self) -> Tuple[bool, str]:
        worst_ln_z, worst_energy = 0.0, 0.0
        for n in (1, 2, 3, 4):
            for x in (0.5, 1.0, 2.0, 5.0):
                point = ThermoPoint(params=SystemParams(n_particles=n, spin_dim=n, omega=1.0), beta=x)
                u_fermi, u_bose = statmech_service.internal_energy_branches(point)
                closed = {
                    SpectrumSymmetry.FERMIONIC: (statmech_service.ln_partition_fermi(point), u_fermi),
                    SpectrumSymmetry.BOSONIC: (statmech_service.ln_partition_bose(point), u_bose),
                }
                for symmetry, (ln_z, energy) in closed.items():
                    spectrum = oracle_service.enumerate_spectrum(symmetry, n, x)
                    worst_ln_z = max(worst_ln_z, abs(oracle_service.ln_partition(spectrum, x) - ln_z))
                    enum_energy = oracle_service.internal_energy(spectrum, x)
                    worst_energy = max(worst_energy, abs(enum_energy - energy) / energy)
        passed = worst_ln_z < 1e-10 and worst_energy < 1e-8
        return passed, f"max |dlnZ|={worst_ln_z:.2e}, max rel dU={worst_energy:.2e}"

    def check_dimension_formulas(self) -> Tuple[bool, str]:
        mismatches = []
        for d in range(1, 7):
            for n in range(1, 7):
                sym = oracle_service.character_dimension(d, n, SpinSymmetry.SYM)
                alt = oracle_service.character_dimension(d, n, SpinSymmetry.ALT)
                if sym != math.comb(d + n - 1, n) or alt != math.comb(d, n):
                    mismatches.append((d, n))
        return not mismatches, f"mismatches: {mismatches}" if mismatches else "36 (d, N) pairs exact"

    def check_derivative_fidelity(self, samples: int = 1000) -> Tuple[bool, str]:
        rng = np.random.default_rng(self.seed)
        failures = []
        for _ in range(samples):
            point = random_capacity_point(rng)
            bad = capacity_mismatches(point)
            if bad:
                failures.append((point.params.n_particles, bad[0]))
        detail = f"{samples - len(failures)}/{samples} points agree"
        if failures:
            detail += f"; first failure N={failures[0][0]}: {failures[0][1]}"
        return not failures, detail

    def check_carnot_limit(self) -> Tuple[bool, str]:
        spec = StirlingSpec(
            params=SystemParams(n_particles=2, spin_dim=2, omega=1.0),
            beta_hot=10.0,
            beta_cold=20.0,
            nu_1=50.0,
            nu_2=-50.0,
        )
        result = engine_service.stirling_cycle(spec)
        passed = (
            result.regime == Regime.ENGINE
            and abs(result.work_cycle - 0.0549306) < 1e-4
            and 0 < result.efficiency
            and abs(result.efficiency - 0.5) < 1e-3
        )
        return passed, f"W={result.work_cycle:.7f}, eta={result.efficiency}"

    def check_first_law(self, samples: int = 5000) -> Tuple[bool, str]:
        rng = np.random.default_rng(self.seed + 1)
        worst, carnot_violations, sign_violations = 0.0, 0, 0
        for i in range(2 * samples):
            if i % 2 == 0:
                spec = random_stirling_spec(rng)
                results = [(engine_service.stirling_cycle(spec), True)]
            else:
                spec = random_otto_spec(rng)
                results = [
                    (engine_service.otto_cycle(spec, OttoHeatForm.NARRATIVE), True),
                    (engine_service.otto_cycle(spec, OttoHeatForm.LITERAL), False),
                ]
            for result, carnot_bound in results:
                gap = abs(result.heat_hot + result.heat_cold - result.work_cycle)
                worst = max(worst, gap / max(abs(result.heat_hot), 1.0))
                if result.regime != Regime.ENGINE:
                    continue
                if not result.efficiency > 0:
                    sign_violations += 1
                # literal Otto bookkeeping understates Q_H and may exceed the Carnot value
                if carnot_bound and result.efficiency > 1 - spec.beta_hot / spec.beta_cold + 1e-9:
                    carnot_violations += 1
        passed = worst < 1e-10 and carnot_violations == 0 and sign_violations == 0
        return passed, (
            f"max closure gap {worst:.2e}, Carnot violations {carnot_violations}, "
            f"non-positive engine efficiencies {sign_violations}"
        )

    def check_work_sign_law(self, samples: int = 1000) -> Tuple[bool, str]:
        rng = np.random.default_rng(self.seed + 2)
        failures = 0
        for _ in range(samples):
            n = int(rng.integers(2, 9))
            params = SystemParams(
                n_particles=n, spin_dim=int(rng.integers(n, n + 4)), omega=float(rng.uniform(0.2, 2.0))
            )
            threshold = engine_service.work_sign_threshold(params)
            beta_hot = float(rng.uniform(0.1, 2.0))
            beta_cold = beta_hot * float(rng.uniform(1.05, 2.5))

            # offsets in units of k_B T_H keep p_F away from exact saturation
            below = np.sort(threshold - rng.uniform(0.01, 8.0, size=2) / beta_hot)
            above = np.sort(threshold + rng.uniform(0.01, 8.0, size=2) / beta_hot)
            for nu_1, nu_2 in ((below[1], below[0]), (above[0], above[1])):
                if nu_1 == nu_2:
                    continue
                result = engine_service.stirling_cycle(
                    StirlingSpec(
                        params=params, beta_hot=beta_hot, beta_cold=beta_cold,
                        nu_1=float(nu_1), nu_2=float(nu_2),
                    )
                )
                if not result.work_cycle > 0:
                    failures += 1
        return failures == 0, f"{failures} sign violations over {2 * samples} cycles"

    def check_otto_advantage(self) -> Tuple[bool, str]:
        n_values = (4, 10, 20, 50)
        rows = engine_service.otto_sweep(n_values)
        by_n = {n: {row.medium: row for row in rows if row.n_particles == n} for n in n_values}
        gaps = []
        passed = True
        for n in n_values:
            anyon = by_n[n][Medium.HAMILTONIAN_ANYON]
            pure = [by_n[n][Medium.FERMION], by_n[n][Medium.BOSON]]
            best_work = max(row.work_per_particle for row in pure)
            best_eta = max(row.efficiency or 0.0 for row in pure)
            passed &= anyon.regime == Regime.ENGINE
            passed &= anyon.work_per_particle > best_work
            passed &= (anyon.efficiency or 0.0) >= best_eta - 1e-12
            gaps.append(anyon.work_per_particle - best_work)
        passed &= gaps[-1] > gaps[0]

        literal = engine_service.otto_sweep(n_values, heat_form=OttoHeatForm.LITERAL)
        literal_etas = []
        for row in literal:
            if row.medium != Medium.HAMILTONIAN_ANYON:
                continue
            passed &= row.efficiency is None or row.efficiency > 0
            literal_etas.append("n/a" if row.efficiency is None else f"{row.efficiency:.4f}")
        detail = "work-per-particle gaps " + ", ".join(f"{g:.4f}" for g in gaps)
        return bool(passed), detail + "; literal anyon efficiencies " + ", ".join(literal_etas)

    def check_transition_diagnostics(self) -> Tuple[bool, str]:
        reports = [
            transition_service.asymptotic_capacities(SpinDimensionRule.D_EQUALS_N, n)
            for n in (25, 50, 100, 200)
        ]
        temp_ok = all(
            abs(r.c_temp_density / r.reference_c_temp_density - 1) < 0.05 for r in reports
        )
        nu_down = all(a.c_nu_density > b.c_nu_density for a, b in zip(reports, reports[1:]))
        omega_up = all(
            abs(b.c_omega_density) > abs(a.c_omega_density) for a, b in zip(reports, reports[1:])
        )
        detail = ", ".join(f"N={r.n_particles}: C_w/N^2={r.c_omega_density:.3g}" for r in reports)
        return temp_ok and nu_down and omega_up, detail

    def check_midpoint_slopes(self) -> Tuple[bool, str]:
        worst = 0.0
        for n in (2, 3, 5, 8, 10):
            for beta in (0.25, 1.0, 2.0):
                params = SystemParams(n_particles=n, spin_dim=n + 1, omega=1.0)
                point = transition_service.transition_point(ThermoPoint(params=params, beta=beta), FreeParameter.NU)
                derivs = statmech_service.pf_derivatives(point)
                expected_omega = beta * params.hbar * n * (n - 1) / 8
                worst = max(worst, abs(derivs.d_nu - beta / 4), abs(abs(derivs.d_omega) - expected_omega))
        return worst < 1e-8, f"max slope deviation {worst:.2e}"

    def check_capacity_crossover(self) -> Tuple[bool, str]:
        params = SystemParams(n_particles=2, spin_dim=2, omega=1.0)
        margins = []
        for temperature in np.geomspace(0.05, 20.0, 200):
            point = ThermoPoint.from_temperature(params, float(temperature))
            margins.append(
                statmech_service.capacities(point).c_temp - statmech_service.branch_heat_capacity(point)
            )
        best = max(margins)
        return best > 0, f"max excess over pure branches {best:.4f}"

    def check_qubit_staircase(self) -> Tuple[bool, str]:
        params = SystemParams(n_particles=2, spin_dim=2, omega=1.0)
        qubits = [
            oracle_service.qubit_requirement(params, float(t), 0.999).num_qubits
            for t in np.linspace(0.1, 10.0, 25)
        ]
        monotone = all(a <= b for a, b in zip(qubits, qubits[1:]))
        return monotone and qubits[0] == 1, f"qubits: {qubits}"

    def check_scan_determinism(self) -> Tuple[bool, str]:
        request = GridScanRequest(
            x_axis=AxisSpec.parse("nu:-5:5:11"),
            y_axis=AxisSpec.parse("beta:0.5:2:4"),
            quantity=ScanQuantity.P_FERMI,
            params=SystemParams(n_particles=2, spin_dim=2, omega=1.0),
            beta=1.0,
        )
        repository = DocumentRepository()
        serial = repository.render_csv(report_builder.scan_document(scan_service.grid_scan(request, jobs=1)))
        parallel = repository.render_csv(report_builder.scan_document(scan_service.grid_scan(request, jobs=8)))
        return serial == parallel, f"{len(serial)} bytes, identical={serial == parallel}"


verification_service = VerificationService()
