from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Document:
    """Tabular result of one command plus its run metadata.

    `columns` fixes the column order of CSV output and the key order of JSON records.
    """
    kind: str
    columns: List[str]
    rows: List[List[Any]]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def records(self) -> List[Dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]
