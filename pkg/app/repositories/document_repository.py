"""
Deterministic CSV/JSON rendering of result documents and their parsing back
"""
import io
import json
import logging
import math
import os
import sys
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from app.config import settings
from app.models.document import Document

logger = logging.getLogger(__name__)


def format_float(value: float, precision: int) -> str:
    """Scientific notation with `precision` significant digits"""
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {value!r} cannot be emitted")
    return f"{value:.{precision - 1}e}"


class DocumentRepository:
    """Renders documents to text and persists them to a path or stdout"""

    def __init__(self, precision: Optional[int] = None):
        self.precision = precision or settings.OUTPUT_PRECISION

    def _json_value(self, value: Any, indent: int) -> str:
        pad = "  " * (indent + 1)
        close = "  " * indent
        if isinstance(value, Enum):
            value = value.value
        if isinstance(value, np.generic):
            value = value.item()
        if isinstance(value, np.ndarray):
            value = value.tolist()

        if value is None or isinstance(value, (bool, str)):
            return json.dumps(value, ensure_ascii=False)
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float):
            return format_float(value, self.precision)
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [
                f"{pad}{json.dumps(str(key), ensure_ascii=False)}: {self._json_value(item, indent + 1)}"
                for key, item in value.items()
            ]
            return "{\n" + ",\n".join(items) + f"\n{close}}}"
        if isinstance(value, (list, tuple)):
            if not value:
                return "[]"
            items = [f"{pad}{self._json_value(item, indent + 1)}" for item in value]
            return "[\n" + ",\n".join(items) + f"\n{close}]"
        raise TypeError(f"cannot serialize {type(value).__name__}")

    def render_json(self, document: Document) -> str:
        payload = {
            "document": document.kind,
            "metadata": document.metadata,
            "columns": document.columns,
            "records": document.records(),
        }
        return self._json_value(payload, 0) + "\n"

    def _csv_cell(self, value: Any) -> Any:
        if isinstance(value, Enum):
            return value.value
        if value is None:
            return ""
        if isinstance(value, (float, np.floating)):
            return format_float(float(value), self.precision)
        return value

    def render_csv(self, document: Document) -> str:
        # object dtype keeps ints and absent values from being coerced to float
        frame = pd.DataFrame(document.rows, columns=document.columns, dtype=object)
        frame = frame.apply(lambda column: column.map(self._csv_cell))

        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()

    def render(self, document: Document, output_format: str) -> str:
        if output_format == "csv":
            return self.render_csv(document)
        return self.render_json(document)

    def write(self, text: str, output_path: Optional[str] = None) -> None:
        """Write to output_path (relative paths resolve against the output directory) or stdout"""
        if output_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return

        path = output_path
        if not os.path.isabs(path):
            path = os.path.join(settings.output_dir, path)
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        try:
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            logger.info(f"Wrote {len(text)} characters to {path}")
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise

    @staticmethod
    def parse_json(text: str) -> Dict[str, Any]:
        return json.loads(text)

    @staticmethod
    def parse_csv(text: str) -> pd.DataFrame:
        return pd.read_csv(io.StringIO(text), keep_default_na=False)
