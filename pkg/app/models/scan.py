from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.system import SystemParams


class ScanParameter(str, Enum):
    TEMPERATURE = "temperature"
    BETA = "beta"
    OMEGA = "omega"
    NU = "nu"
    N_PARTICLES = "n_particles"


class Spacing(str, Enum):
    LINEAR = "linear"
    LOG = "log"


class ScanQuantity(str, Enum):
    P_FERMI = "p_fermi"
    INTERNAL_ENERGY = "internal_energy"
    C_TEMP = "c_temp"
    C_OMEGA = "c_omega"
    C_NU = "c_nu"
    PHI = "phi"


class CellStatus(str, Enum):
    OK = "ok"
    EMPTY_ANTISYMMETRIC = "empty_antisymmetric"


class AxisSpec(BaseModel):
    """One axis of a parameter grid"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    parameter: ScanParameter
    start: float
    stop: float
    count: int = Field(..., ge=2)
    spacing: Spacing = Spacing.LINEAR

    @model_validator(mode="after")
    def check_range(self) -> "AxisSpec":
        if not self.start < self.stop:
            raise ValueError("axis start must be smaller than stop")
        if self.spacing == Spacing.LOG and self.start <= 0:
            raise ValueError("log spacing requires a positive start")
        return self

    @classmethod
    def parse(cls, text: str) -> "AxisSpec":
        """Parse the `param:start:stop:count[:log]` grammar"""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise ValueError(f"axis '{text}' must look like param:start:stop:count[:log]")
        spacing = Spacing.LINEAR
        if len(parts) == 5:
            if parts[4] != "log":
                raise ValueError(f"unknown axis spacing '{parts[4]}'")
            spacing = Spacing.LOG
        return cls(
            parameter=parts[0],
            start=float(parts[1]),
            stop=float(parts[2]),
            count=int(parts[3]),
            spacing=spacing,
        )

    def values(self) -> np.ndarray:
        if self.spacing == Spacing.LOG:
            grid = np.geomspace(self.start, self.stop, self.count)
        else:
            grid = np.linspace(self.start, self.stop, self.count)
        if self.parameter == ScanParameter.N_PARTICLES:
            grid = np.rint(grid)
        return grid

    def describe(self) -> dict:
        return {
            "parameter": self.parameter.value,
            "start": self.start,
            "stop": self.stop,
            "count": self.count,
            "spacing": self.spacing.value,
        }


class GridScanRequest(BaseModel):
    """Axes, quantity selector and base point of a grid scan"""
    model_config = ConfigDict(frozen=True)

    x_axis: AxisSpec
    y_axis: AxisSpec
    quantity: ScanQuantity
    params: SystemParams
    beta: float = Field(..., gt=0)

    @model_validator(mode="after")
    def check_axes(self) -> "GridScanRequest":
        thermal = {ScanParameter.TEMPERATURE, ScanParameter.BETA}
        if self.x_axis.parameter == self.y_axis.parameter:
            raise ValueError("x and y axes must scan different parameters")
        if self.x_axis.parameter in thermal and self.y_axis.parameter in thermal:
            raise ValueError("temperature and beta cannot both be scanned")
        return self


@dataclass
class GridScan:
    """Dense row-major result matrix; rows follow the y axis, columns the x axis"""
    request: GridScanRequest
    x_values: np.ndarray
    y_values: np.ndarray
    values: np.ndarray
    status: np.ndarray

    @property
    def flagged_cells(self) -> int:
        return int(np.count_nonzero(self.status != CellStatus.OK.value))
