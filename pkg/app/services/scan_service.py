"""
Parameter-grid evaluation with optional process-level parallelism.

Rows are dispatched to workers and written back by index, so the assembled
matrix does not depend on the worker count or on completion order.
"""
import concurrent.futures
import logging
from typing import Any, Callable, List, Sequence, Tuple

import numpy as np

from app.models.scan import CellStatus, GridScan, GridScanRequest, ScanParameter, ScanQuantity
from app.models.system import ThermoPoint
from app.services.core import core_service
from app.services.statmech import statmech_service

logger = logging.getLogger(__name__)


def map_rows(func: Callable[[Any], Any], row_args: Sequence[Any], jobs: int = 1) -> List[Any]:
    """Evaluate func over row_args, returning results in input order"""
    if jobs <= 1 or len(row_args) <= 1:
        return [func(args) for args in row_args]

    results: List[Any] = [None] * len(row_args)
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        futures = {executor.submit(func, args): i for i, args in enumerate(row_args)}
        for future in concurrent.futures.as_completed(futures):
            i = futures[future]
            try:
                results[i] = future.result()
            except Exception as e:
                logger.error(f"Grid row {i} failed: {e}")
                raise
    return results


def _bind(point: ThermoPoint, parameter: ScanParameter, value: float) -> ThermoPoint:
    if parameter == ScanParameter.TEMPERATURE:
        return ThermoPoint.from_temperature(point.params, value)
    if parameter == ScanParameter.BETA:
        return point.with_beta(value)
    if parameter == ScanParameter.N_PARTICLES:
        return point.with_params(n_particles=int(value))
    return point.with_params(**{parameter.value: value})


def evaluate_quantity(point: ThermoPoint, quantity: ScanQuantity) -> float:
    """One grid cell; cells with an empty antisymmetric subspace take the pure-fermionic value"""
    if quantity == ScanQuantity.P_FERMI:
        return statmech_service.fermionic_weight(point)
    if quantity == ScanQuantity.INTERNAL_ENERGY:
        return statmech_service.internal_energy(point)
    if quantity == ScanQuantity.PHI:
        if point.params.antisymmetric_empty:
            return 0.0
        return core_service.phi(point)

    report = statmech_service.capacities(point)
    return {
        ScanQuantity.C_TEMP: report.c_temp,
        ScanQuantity.C_OMEGA: report.c_omega,
        ScanQuantity.C_NU: report.c_nu,
    }[quantity]


def _evaluate_row(args: Tuple[GridScanRequest, float]) -> Tuple[List[float], List[str]]:
    request, y_value = args
    base = ThermoPoint(params=request.params, beta=request.beta)
    row_point = _bind(base, request.y_axis.parameter, y_value)

    values, status = [], []
    for x_value in request.x_axis.values():
        point = _bind(row_point, request.x_axis.parameter, float(x_value))
        values.append(float(evaluate_quantity(point, request.quantity)))
        if point.params.antisymmetric_empty:
            status.append(CellStatus.EMPTY_ANTISYMMETRIC.value)
        else:
            status.append(CellStatus.OK.value)
    return values, status


class ScanService:
    """Dense two-axis scans of a single thermodynamic quantity"""

    def grid_scan(self, request: GridScanRequest, jobs: int = 1) -> GridScan:
        x_values = request.x_axis.values()
        y_values = request.y_axis.values()
        logger.info(
            f"Scanning {request.quantity.value} over "
            f"{request.y_axis.parameter.value} x {request.x_axis.parameter.value} "
            f"({y_values.size} x {x_values.size}, jobs={jobs})"
        )

        rows = map_rows(_evaluate_row, [(request, float(y)) for y in y_values], jobs)
        values = np.array([row[0] for row in rows], dtype=float)
        status = np.array([row[1] for row in rows], dtype=object)

        scan = GridScan(
            request=request,
            x_values=x_values,
            y_values=y_values,
            values=values,
            status=status,
        )
        if scan.flagged_cells:
            logger.warning(f"{scan.flagged_cells} cells fell back to the pure-fermionic branch")
        return scan


scan_service = ScanService()
