from fastapi import APIRouter, HTTPException, status
from fastapi.responses import JSONResponse
from typing import Dict, Any
import logging
from datetime import datetime

from app.config import settings
from app.models.system import SystemParams, ThermoPoint
from app.services.statmech import statmech_service

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1", tags=["health"])

@router.get("/health", response_model=Dict[str, Any])
async def health_check():
    """
    Basic health check endpoint

    Evaluates one known point so a broken numerical stack reports unhealthy
    """
    try:
        point = ThermoPoint(params=SystemParams(n_particles=2, spin_dim=2, omega=1.0), beta=1.0)
        p_fermi = statmech_service.fermionic_weight(point)
        healthy = abs(p_fermi - 0.5246331) < 1e-6

        health_status = {
            "status": "healthy" if healthy else "degraded",
            "timestamp": datetime.now().isoformat(),
            "service": "anyon-thermo",
            "version": "1.0.0",
            "units": {"hbar": settings.HBAR, "k_boltzmann": settings.K_BOLTZMANN}
        }

        return JSONResponse(
            status_code=status.HTTP_200_OK,
            content=health_status
        )

    except Exception as e:
        logger.error(f"Health check failed: {e}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail={
                "status": "unhealthy",
                "error": str(e),
                "timestamp": datetime.now().isoformat()
            }
        )
