from typing import Optional

from pydantic import BaseModel, Field, model_validator

from app.models.engine import OttoHeatForm, OttoSpec
from app.models.system import FreeParameter, SystemParams, ThermoPoint


class PointRequest(BaseModel):
    """Pydantic model for single-point requests; exactly one of beta and temperature"""
    params: SystemParams
    beta: Optional[float] = Field(default=None, gt=0)
    temperature: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_thermal(self) -> "PointRequest":
        if (self.beta is None) == (self.temperature is None):
            raise ValueError("give exactly one of beta and temperature")
        return self

    def to_point(self) -> ThermoPoint:
        if self.temperature is not None:
            return ThermoPoint.from_temperature(self.params, self.temperature)
        return ThermoPoint(params=self.params, beta=self.beta)


class TransitionRequest(PointRequest):
    free: FreeParameter = FreeParameter.NU


class OttoRequest(BaseModel):
    spec: OttoSpec
    heat_form: Optional[OttoHeatForm] = None
