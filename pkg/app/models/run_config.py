from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import settings


class Command(str, Enum):
    PROPS = "props"
    SCAN = "scan"
    STIRLING = "stirling"
    OTTO = "otto"
    QUBITS = "qubits"
    VERIFY = "verify"
    TRANSITION = "transition"
    STIRLING_MAP = "stirling-map"
    OTTO_SWEEP = "otto-sweep"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class RunConfig(BaseModel):
    """One fully bound CLI invocation"""
    model_config = ConfigDict(frozen=True)

    command: Command
    bindings: Dict[str, Any] = Field(default_factory=dict)
    output_format: OutputFormat = OutputFormat.JSON
    output_path: Optional[str] = None
    precision: int = Field(default_factory=lambda: settings.OUTPUT_PRECISION, ge=1, le=17)
    jobs: int = Field(default_factory=lambda: settings.SCAN_JOBS, ge=1)

    @model_validator(mode="after")
    def check_temperature(self) -> "RunConfig":
        if self.bindings.get("temp") is not None and self.bindings.get("beta") is not None:
            raise ValueError("--temp and --beta are mutually exclusive")
        return self

    def get(self, key: str, default: Any = None) -> Any:
        value = self.bindings.get(key)
        return default if value is None else value
