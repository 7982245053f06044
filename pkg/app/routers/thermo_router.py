from fastapi import APIRouter, HTTPException, status
from fastapi.responses import JSONResponse
from typing import Dict, Any
import logging
from pydantic import ValidationError

from app.models.document import Document
from app.models.requests import PointRequest, TransitionRequest
from app.models.validation import AnyonDomainError, ErrorFormatter, NoBracketError
from app.repositories.document_repository import DocumentRepository
from app.services.report_builder import report_builder
from app.services.transitions import transition_service

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/thermo", tags=["thermo"])


def document_response(document: Document) -> JSONResponse:
    """Same payload as the CLI JSON document"""
    repository = DocumentRepository()
    return JSONResponse(
        status_code=status.HTTP_200_OK,
        content=repository.parse_json(repository.render_json(document))
    )


def raise_http_error(operation: str, error: Exception):
    """Map validation, domain and numerical failures onto HTTP errors"""
    if isinstance(error, ValidationError):
        logger.warning(f"Validation error in {operation}: {error}")
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=ErrorFormatter.format_pydantic_error(error)
        )
    if isinstance(error, NoBracketError):
        logger.warning(f"Numerical failure in {operation}: {error}")
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=ErrorFormatter.format_numerical_error("bracketing", str(error))
        )
    if isinstance(error, AnyonDomainError):
        logger.warning(f"Domain error in {operation}: {error}")
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=ErrorFormatter.format_domain_error(error)
        )

    logger.error(f"Unexpected error in {operation}: {error}")
    raise HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail={
            "error": "PROCESSING_ERROR",
            "message": f"An error occurred while computing {operation}",
            "details": str(error)
        }
    )


@router.post("/props", response_model=Dict[str, Any])
async def thermo_props(request: PointRequest):
    """
    Equilibrium properties at one point

    Partition functions, fermionic weight, internal energies, free energy and
    the capacity report, with a status field for the empty antisymmetric subspace
    """
    try:
        document = report_builder.props_document(request.to_point())
        logger.info(f"Computed props for N={request.params.n_particles}, d={request.params.spin_dim}")
        return document_response(document)
    except Exception as e:
        raise_http_error("props", e)


@router.post("/transition", response_model=Dict[str, Any])
async def thermo_transition(request: TransitionRequest):
    """
    Locate the p_F = 1/2 midpoint in the chosen free parameter

    Returns the bisection root, the closed-form value and the transition width
    """
    try:
        point = request.to_point()
        value = transition_service.solve_transition(point, request.free)
        document = report_builder.transition_document(
            point,
            request.free.value,
            value,
            transition_service.closed_form_transition(point, request.free),
            transition_service.transition_width(point, request.free),
        )
        return document_response(document)
    except Exception as e:
        raise_http_error("transition", e)
