"""
Field symbol, one `key = value;` a section accepts.
"""

from typing import Any, Optional

from .symbol import *


class FieldSymbol(Symbol):
    def __init__(
        self,
        name: str,
        type: ValueType,
        required: bool = False,
        default: Any = None,
        unit: Optional[str] = None,
    ) -> None:
        super().__init__(name, type)
        self.required = required
        self.default = default
        self.unit = unit

    def __str__(self) -> str:
        unit = f" [{self.unit}]" if self.unit else ""
        return "field %s : %s%s" % (self.name, str(self.type), unit)
