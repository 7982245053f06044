from fastapi import APIRouter
from typing import Dict, Any
import logging

from app.config import settings
from app.models.engine import OttoHeatForm, StirlingSpec
from app.models.requests import OttoRequest
from app.routers.thermo_router import document_response, raise_http_error
from app.services.engines import engine_service
from app.services.report_builder import report_builder

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/engines", tags=["engines"])


@router.post("/stirling", response_model=Dict[str, Any])
async def stirling_cycle(spec: StirlingSpec):
    """
    Run the bias-driven Stirling cycle

    The hot isotherm drives nu_2 -> nu_1, the cold isotherm nu_1 -> nu_2.
    Limits are attached unless the antisymmetric subspace is empty.
    """
    try:
        result = engine_service.stirling_cycle(spec)
        limits = None if spec.params.antisymmetric_empty else engine_service.stirling_limits(spec)
        logger.info(f"Stirling cycle: W={result.work_cycle:.6g}, regime={result.regime.value}")
        return document_response(report_builder.stirling_document(spec, result, limits))
    except Exception as e:
        raise_http_error("stirling", e)


@router.post("/otto", response_model=Dict[str, Any])
async def otto_cycle(request: OttoRequest):
    """
    Run the frequency-switched Otto cycle for the selected working medium
    """
    try:
        heat_form = OttoHeatForm(request.heat_form or settings.OTTO_HEAT_FORM)
        result = engine_service.otto_cycle(request.spec, heat_form)
        logger.info(f"Otto cycle ({request.spec.medium.value}): W={result.work_cycle:.6g}")
        return document_response(report_builder.otto_document(request.spec, result, heat_form.value))
    except Exception as e:
        raise_http_error("otto", e)
