"""
Turns service results into the Document shape shared by the CLI and the HTTP API
"""
import logging
from typing import Any, Dict, List, Optional, Sequence

from app.models.document import Document
from app.models.engine import CycleResult, OttoSpec, OttoSweepRow, StirlingLimits, StirlingMap, StirlingSpec
from app.models.oracle import CheckResult, QubitReport
from app.models.scan import GridScan
from app.models.system import SystemParams, ThermoPoint
from app.services.core import core_service
from app.services.statmech import statmech_service

logger = logging.getLogger(__name__)

CYCLE_COLUMNS = ["work_cycle", "heat_hot", "heat_cold", "regime", "efficiency", "cop", "empty_subspace"]


def _params_metadata(params: SystemParams) -> Dict[str, Any]:
    return {
        "n_particles": params.n_particles,
        "spin_dim": params.spin_dim,
        "omega": params.omega,
        "nu": params.nu,
        "hbar": params.hbar,
        "k_boltzmann": params.k_boltzmann,
    }


def _cycle_cells(result: CycleResult) -> List[Any]:
    return [
        result.work_cycle,
        result.heat_hot,
        result.heat_cold,
        result.regime.value,
        result.efficiency,
        result.cop,
        result.empty_subspace,
    ]


class ReportBuilder:
    """One builder per command; columns are fixed per document kind"""

    def props_document(self, point: ThermoPoint) -> Document:
        params = point.params
        props = statmech_service.thermo_props(point)
        capacities = statmech_service.capacities(point)
        phi = None if params.antisymmetric_empty else core_service.phi(point)

        values = {
            "beta": point.beta,
            "temperature": point.temperature,
            "phi": phi,
            **props.to_dict(),
            "free_energy": statmech_service.free_energy(point),
            **capacities.to_dict(),
            "status": "empty_antisymmetric" if params.antisymmetric_empty else "ok",
        }
        return Document(
            kind="props",
            columns=list(values.keys()),
            rows=[list(values.values())],
            metadata=_params_metadata(params),
        )

    def scan_document(self, scan: GridScan) -> Document:
        request = scan.request
        y_name = request.y_axis.parameter.value
        x_name = request.x_axis.parameter.value
        rows = []
        for j, y_value in enumerate(scan.y_values):
            for i, x_value in enumerate(scan.x_values):
                rows.append([float(y_value), float(x_value), float(scan.values[j, i]), scan.status[j, i]])

        return Document(
            kind="scan",
            columns=[y_name, x_name, request.quantity.value, "status"],
            rows=rows,
            metadata={
                **_params_metadata(request.params),
                "beta": request.beta,
                "quantity": request.quantity.value,
                "x_axis": request.x_axis.describe(),
                "y_axis": request.y_axis.describe(),
                "flagged_cells": scan.flagged_cells,
            },
        )

    def stirling_document(
        self, spec: StirlingSpec, result: CycleResult, limits: Optional[StirlingLimits] = None
    ) -> Document:
        metadata = {**_params_metadata(spec.params), "work_sign_threshold": spec.params.pauli_energy}
        if limits is not None:
            metadata["limits"] = limits.to_dict()
        return Document(
            kind="stirling",
            columns=["beta_hot", "beta_cold", "nu_1", "nu_2"] + CYCLE_COLUMNS,
            rows=[[spec.beta_hot, spec.beta_cold, spec.nu_1, spec.nu_2] + _cycle_cells(result)],
            metadata=metadata,
        )

    def otto_document(self, spec: OttoSpec, result: CycleResult, heat_form: str) -> Document:
        return Document(
            kind="otto",
            columns=["medium", "k_fermi", "beta_hot", "beta_cold", "omega_1", "omega_2"] + CYCLE_COLUMNS,
            rows=[
                [spec.medium.value, spec.k_fermi, spec.beta_hot, spec.beta_cold, spec.omega_1, spec.omega_2]
                + _cycle_cells(result)
            ],
            metadata={**_params_metadata(spec.params), "heat_form": heat_form},
        )

    def qubits_document(self, params: SystemParams, reports: Sequence[QubitReport]) -> Document:
        columns = ["temperature", "nu_used", "coverage", "num_states", "num_qubits", "covered_population"]
        return Document(
            kind="qubits",
            columns=columns,
            rows=[[report.to_dict()[c] for c in columns] for report in reports],
            metadata=_params_metadata(params),
        )

    def transition_document(
        self, point: ThermoPoint, free: str, value: float, closed_form: float, width: float
    ) -> Document:
        return Document(
            kind="transition",
            columns=["free", "value", "closed_form", "width"],
            rows=[[free, value, closed_form, width]],
            metadata={**_params_metadata(point.params), "beta": point.beta},
        )

    def stirling_map_document(
        self, params: SystemParams, beta_hot: float, beta_cold: float, stirling_map: StirlingMap
    ) -> Document:
        rows = []
        for j, nu_2 in enumerate(stirling_map.nu_2_values):
            for i, nu_1 in enumerate(stirling_map.nu_1_values):
                rows.append([
                    float(nu_2),
                    float(nu_1),
                    float(stirling_map.work[j, i]),
                    float(stirling_map.heat_hot[j, i]),
                    float(stirling_map.heat_cold[j, i]),
                    stirling_map.regime[j, i],
                    float(stirling_map.performance[j, i]),
                ])
        return Document(
            kind="stirling-map",
            columns=["nu_2", "nu_1", "work_cycle", "heat_hot", "heat_cold", "regime", "performance"],
            rows=rows,
            metadata={**_params_metadata(params), "beta_hot": beta_hot, "beta_cold": beta_cold},
        )

    def otto_sweep_document(self, rows: Sequence[OttoSweepRow], metadata: Dict[str, Any]) -> Document:
        return Document(
            kind="otto-sweep",
            columns=[
                "n_particles", "medium", "omega_1", "omega_2",
                "work_cycle", "work_per_particle", "efficiency", "regime",
            ],
            rows=[
                [
                    row.n_particles, row.medium.value, row.omega_1, row.omega_2,
                    row.work_cycle, row.work_per_particle, row.efficiency, row.regime.value,
                ]
                for row in rows
            ],
            metadata=metadata,
        )

    def verify_document(self, results: Sequence[CheckResult]) -> Document:
        return Document(
            kind="verify",
            columns=["check", "passed", "elapsed_ms", "detail"],
            rows=[[r.name, r.passed, r.elapsed_ms, r.detail] for r in results],
            metadata={"passed": all(r.passed for r in results)},
        )


report_builder = ReportBuilder()
