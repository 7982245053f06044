import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.models.engine import Medium, OttoHeatForm, OttoSpec, Regime, StirlingSpec
from app.models.scan import AxisSpec
from app.models.system import SystemParams, ThermoPoint
from app.models.validation import CycleSpecError, InfeasibleTargetError
from app.services.core import core_service
from app.services.engines import classify_cycle, engine_service
from app.services.statmech import statmech_service
from app.services.verification import random_otto_spec, random_stirling_spec


def _params(n=2, d=2, omega=1.0, nu=0.0):
    return SystemParams(n_particles=n, spin_dim=d, omega=omega, nu=nu, hbar=1.0, k_boltzmann=1.0)


def _carnot_spec():
    return StirlingSpec(params=_params(), beta_hot=10.0, beta_cold=20.0, nu_1=50.0, nu_2=-50.0)


class TestClassification:

    def test_engine(self):
        result = classify_cycle(1.0, 4.0, -3.0)
        assert result.regime == Regime.ENGINE
        assert result.efficiency == pytest.approx(0.25)
        assert result.cop is None

    def test_refrigerator(self):
        result = classify_cycle(-1.0, -3.0, 2.0)
        assert result.regime == Regime.REFRIGERATOR
        assert result.cop == pytest.approx(2.0)
        assert result.efficiency is None

    def test_neither(self):
        assert classify_cycle(0.0, 1.0, -1.0).regime == Regime.NEITHER
        assert classify_cycle(-1.0, 0.5, -1.5).regime == Regime.NEITHER

    def test_positive_work_without_heat_intake_is_not_an_engine(self):
        result = classify_cycle(1.0, -0.5, 1.5)
        assert result.regime == Regime.NEITHER
        assert result.efficiency is None
        assert result.cop is None


class TestStirling:

    def test_identity_stroke_is_workless(self):
        assert engine_service.isothermal_nu_work(2.0, 1.3, 1.3, _params()) == 0.0

    def test_isothermal_work_is_free_energy_drop(self):
        params = _params()
        beta = 10.0
        work = engine_service.isothermal_nu_work(beta, 50.0, -50.0, params)
        f_initial = statmech_service.free_energy(ThermoPoint(params=params.replace(nu=50.0), beta=beta))
        f_final = statmech_service.free_energy(ThermoPoint(params=params.replace(nu=-50.0), beta=beta))
        assert work == pytest.approx(f_initial - f_final, rel=1e-9)
        assert work == pytest.approx(51.0 - math.log(3) / beta, rel=1e-9)

    def test_empty_subspace_stroke_is_workless(self):
        assert engine_service.isothermal_nu_work(1.0, 2.0, -2.0, _params(n=3, d=2)) == 0.0

    def test_carnot_limit(self):
        result = engine_service.stirling_cycle(_carnot_spec())
        assert result.regime == Regime.ENGINE
        assert result.work_cycle == pytest.approx(0.0549306, abs=1e-6)
        assert result.efficiency == pytest.approx(0.5, abs=1e-3)

    def test_equal_biases_give_no_work(self):
        spec = StirlingSpec(params=_params(), beta_hot=1.0, beta_cold=2.0, nu_1=0.3, nu_2=0.3)
        result = engine_service.stirling_cycle(spec)
        assert result.work_cycle == 0.0
        assert result.regime == Regime.NEITHER

    def test_limits(self):
        spec = _carnot_spec()
        assert engine_service.limiting_work(spec.params, 10.0, 20.0) == pytest.approx(0.05 * math.log(3))
        assert engine_service.limiting_work(spec.params, 3.0, 3.0) == 0.0
        limits = engine_service.stirling_limits(spec)
        assert limits.eta_limit == pytest.approx(0.5, abs=1e-3)
        result = engine_service.stirling_cycle(spec)
        assert result.heat_hot == pytest.approx(limits.q_hot_limit, rel=1e-6)

    def test_cold_heat_oracle_and_first_law(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            spec = random_stirling_spec(rng)
            result = engine_service.stirling_cycle(spec)
            scale = max(abs(result.heat_hot), 1.0)
            assert abs(result.heat_hot + result.heat_cold - result.work_cycle) < 1e-10 * scale
            assert engine_service.stirling_cold_heat_oracle(spec) == pytest.approx(result.heat_cold, abs=1e-9 * scale)
            if result.regime == Regime.ENGINE:
                assert result.efficiency <= 1 - spec.beta_hot / spec.beta_cold + 1e-9

    def test_work_sign_law(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(2, 7))
            params = _params(n=n, d=n + 1, omega=float(rng.uniform(0.3, 1.5)))
            threshold = engine_service.work_sign_threshold(params)
            beta_hot = float(rng.uniform(0.2, 1.5))
            beta_cold = 1.8 * beta_hot
            below = np.sort(threshold - rng.uniform(0.05, 6.0, size=2) / beta_hot)
            above = np.sort(threshold + rng.uniform(0.05, 6.0, size=2) / beta_hot)
            for nu_1, nu_2 in ((below[1], below[0]), (above[0], above[1])):
                spec = StirlingSpec(
                    params=params, beta_hot=beta_hot, beta_cold=beta_cold, nu_1=float(nu_1), nu_2=float(nu_2)
                )
                assert engine_service.stirling_cycle(spec).work_cycle > 0

    def test_bath_order_is_validated(self):
        with pytest.raises(ValidationError):
            StirlingSpec(params=_params(), beta_hot=2.0, beta_cold=1.0, nu_1=0.0, nu_2=1.0)

    def test_stirling_map(self):
        stirling_map = engine_service.stirling_map(
            _params(), 1.0, 2.0, AxisSpec.parse("nu:-3:3:4"), AxisSpec.parse("nu:-3:3:4")
        )
        assert stirling_map.work.shape == (4, 4)
        for i in range(4):
            assert stirling_map.work[i, i] == 0.0
            assert stirling_map.regime[i, i] == Regime.NEITHER.value
        parallel = engine_service.stirling_map(
            _params(), 1.0, 2.0, AxisSpec.parse("nu:-3:3:4"), AxisSpec.parse("nu:-3:3:4"), jobs=2
        )
        assert np.array_equal(stirling_map.work, parallel.work)

    def test_stirling_map_rejects_bad_grids(self):
        with pytest.raises(CycleSpecError):
            engine_service.stirling_map(
                _params(), 2.0, 1.0, AxisSpec.parse("nu:-3:3:4"), AxisSpec.parse("nu:-3:3:4")
            )
        with pytest.raises(CycleSpecError):
            engine_service.stirling_map(
                _params(), 1.0, 2.0, AxisSpec.parse("beta:1:3:4"), AxisSpec.parse("nu:-3:3:4")
            )


class TestFreeEnergySlopes:

    def test_nu_slope_at_transition(self):
        h = core_service.h_of(2, 2)
        point = ThermoPoint(params=_params(nu=1.0 - h), beta=1.0)
        assert engine_service.free_energy_nu_slope(point) == pytest.approx(0.5)

    def test_nu_slope_saturates(self):
        point = ThermoPoint(params=_params(nu=100.0), beta=1.0)
        assert engine_service.free_energy_nu_slope(point) == pytest.approx(0.0, abs=1e-30)

    def test_nu_slope_matches_free_energy_difference(self):
        point = ThermoPoint(params=_params(n=3, d=4, nu=1.2), beta=0.7)
        step = 1e-5
        up = statmech_service.free_energy(point.with_params(nu=1.2 + step))
        down = statmech_service.free_energy(point.with_params(nu=1.2 - step))
        assert engine_service.free_energy_nu_slope(point) == pytest.approx((up - down) / (2 * step), rel=1e-6)

    def test_cross_slope_matches_difference(self):
        point = ThermoPoint(params=_params(n=3, d=4, nu=1.2), beta=0.7)
        step = 1e-5
        up = engine_service.free_energy_nu_slope(point.with_beta(0.7 + step))
        down = engine_service.free_energy_nu_slope(point.with_beta(0.7 - step))
        assert engine_service.free_energy_cross_slope(point) == pytest.approx((up - down) / (2 * step), rel=1e-6)

    def test_cross_slope_changes_sign_at_threshold(self):
        params = _params(n=3, d=3)
        threshold = engine_service.work_sign_threshold(params)
        below = ThermoPoint(params=params.replace(nu=threshold - 0.5), beta=1.0)
        above = ThermoPoint(params=params.replace(nu=threshold + 0.5), beta=1.0)
        assert engine_service.free_energy_cross_slope(below) > 0
        assert engine_service.free_energy_cross_slope(above) < 0


class TestOtto:

    def _spec(self, medium=Medium.HAMILTONIAN_ANYON, omega_2=0.5, k_fermi=None):
        return OttoSpec(
            params=_params(n=3, d=3),
            beta_hot=0.5,
            beta_cold=1.0,
            omega_1=1.0,
            omega_2=omega_2,
            medium=medium,
            k_fermi=k_fermi,
        )

    def test_equal_frequencies_give_no_work(self):
        assert engine_service.otto_cycle(self._spec(omega_2=1.0)).work_cycle == 0.0

    def test_fermion_boson_work_difference(self):
        fermion = engine_service.otto_cycle(self._spec(Medium.FERMION))
        boson = engine_service.otto_cycle(self._spec(Medium.BOSON))
        omega_1, omega_2, pairs = 1.0, 0.5, 3.0
        expected = (1 - omega_2 / omega_1) * omega_1 * pairs - (omega_1 / omega_2 - 1) * omega_2 * pairs
        assert fermion.work_cycle - boson.work_cycle == pytest.approx(expected, abs=1e-12)

    def test_first_law_and_cold_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            spec = random_otto_spec(rng)
            result = engine_service.otto_cycle(spec, OttoHeatForm.NARRATIVE)
            scale = max(abs(result.heat_hot), 1.0)
            assert abs(result.heat_hot + result.heat_cold - result.work_cycle) < 1e-10 * scale
            assert engine_service.otto_cold_heat_oracle(spec) == pytest.approx(result.heat_cold, abs=1e-9 * scale)

    def test_narrative_efficiency_is_compression_ratio(self):
        for medium in (Medium.HAMILTONIAN_ANYON, Medium.FERMION, Medium.BOSON):
            result = engine_service.otto_cycle(self._spec(medium, omega_2=0.2), OttoHeatForm.NARRATIVE)
            if result.regime == Regime.ENGINE:
                assert result.efficiency == pytest.approx(1 - 0.2, rel=1e-10)

    def test_literal_heat_form_keeps_work(self):
        narrative = engine_service.otto_cycle(self._spec(), OttoHeatForm.NARRATIVE)
        literal = engine_service.otto_cycle(self._spec(), OttoHeatForm.LITERAL)
        assert literal.work_cycle == narrative.work_cycle
        assert literal.heat_hot != narrative.heat_hot

    def test_literal_heat_form_without_heat_intake_is_neither(self):
        row = engine_service.otto_sweep([4], media=(Medium.BOSON,), heat_form=OttoHeatForm.LITERAL)[0]
        narrative = engine_service.otto_sweep([4], media=(Medium.BOSON,), heat_form=OttoHeatForm.NARRATIVE)[0]
        assert row.work_cycle == pytest.approx(narrative.work_cycle, rel=1e-12)
        assert row.work_cycle > 0
        assert row.regime == Regime.NEITHER
        assert row.efficiency is None

    def test_engine_efficiencies_are_positive_for_both_heat_forms(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            spec = random_otto_spec(rng)
            for heat_form in OttoHeatForm:
                result = engine_service.otto_cycle(spec, heat_form)
                scale = max(abs(result.heat_hot), 1.0)
                assert abs(result.heat_hot + result.heat_cold - result.work_cycle) < 1e-10 * scale
                if result.regime == Regime.ENGINE:
                    assert result.heat_hot > 0
                    assert result.efficiency > 0
                else:
                    assert result.efficiency is None

    def test_statistical_medium_needs_fraction(self):
        with pytest.raises(ValidationError):
            self._spec(Medium.STATISTICAL)
        with pytest.raises(ValidationError):
            self._spec(Medium.FERMION, k_fermi=0.5)
        result = engine_service.otto_cycle(self._spec(Medium.STATISTICAL, k_fermi=0.5))
        assert math.isfinite(result.work_cycle)

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            OttoSpec(params=_params(nu=0.5), beta_hot=0.5, beta_cold=1.0, omega_1=1.0, omega_2=0.5)
        with pytest.raises(ValidationError):
            OttoSpec(params=_params(), beta_hot=0.5, beta_cold=1.0, omega_1=1.0, omega_2=2.0)

    def test_omega_from_phi_target(self):
        assert engine_service.omega_from_phi_target(1.0, 0.0, _params()) == pytest.approx(math.log(3))
        omega = engine_service.omega_from_phi_target(1.0, -0.1, _params(n=50, d=50))
        assert omega == pytest.approx((core_service.h_of(50, 50) - 0.1) / 1225)
        point = ThermoPoint(params=_params(n=50, d=50, omega=omega), beta=1.0)
        assert core_service.phi(point) == pytest.approx(-0.1, abs=1e-10)

    def test_omega_from_phi_target_infeasible(self):
        with pytest.raises(InfeasibleTargetError):
            engine_service.omega_from_phi_target(1.0, 0.0, _params(n=1, d=2))
        with pytest.raises(InfeasibleTargetError):
            engine_service.omega_from_phi_target(1.0, -5.0, _params())

    def test_anyons_outperform_pure_media(self):
        n_values = (4, 10, 20, 50)
        rows = engine_service.otto_sweep(n_values)
        gaps = []
        for n in n_values:
            by_medium = {row.medium: row for row in rows if row.n_particles == n}
            anyon = by_medium[Medium.HAMILTONIAN_ANYON]
            pure = [by_medium[Medium.FERMION], by_medium[Medium.BOSON]]
            assert anyon.regime == Regime.ENGINE
            assert anyon.work_per_particle > max(row.work_per_particle for row in pure)
            assert anyon.efficiency >= max(row.efficiency or 0.0 for row in pure) - 1e-12
            gaps.append(anyon.work_per_particle - max(row.work_per_particle for row in pure))
        assert gaps[-1] > gaps[0]
