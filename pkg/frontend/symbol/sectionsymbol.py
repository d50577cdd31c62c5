"""
Section symbol, one `name [index] { ... }` block kind and the fields it accepts.
"""

from typing import Optional

from .fieldsymbol import FieldSymbol
from .symbol import *


class SectionSymbol(Symbol):
    def __init__(
        self,
        name: str,
        fields: list[FieldSymbol],
        required: bool = False,
        indexed: bool = False,
    ) -> None:
        super().__init__(name, None)
        self.fields = {field.name: field for field in fields}
        self.required = required
        self.indexed = indexed

    def __str__(self) -> str:
        index = " <index>" if self.indexed else ""
        return "section %s%s" % (self.name, index)

    def field(self, name: str) -> Optional[FieldSymbol]:
        return self.fields.get(name)

    def requiredFields(self) -> list[FieldSymbol]:
        return [field for field in self.fields.values() if field.required]
