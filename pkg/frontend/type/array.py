"""
Array type is represented in a recursive form.

An array type consists of two parts: base type and length (`None` for any length).

Some examples:
    ArrayType.multidim(REAL, None, 2) == real[][2], e.g. a list of planar points
    ArrayType(ArrayType(INT, 2), None) == int[][2], e.g. an edge list
"""

from __future__ import annotations

from typing import Any, Optional

from .type import CoercionError, ValueType, describe


class ArrayType(ValueType):
    def __init__(self, base: ValueType, length: Optional[int] = None) -> None:
        super().__init__()
        self.base = base
        self.length = length

    def is_array(self):
        return True

    @property
    def indexed(self) -> ValueType:
        return self.base

    @property
    def _indexes(self) -> str:
        here = "" if self.length is None else str(self.length)
        if isinstance(self.base, ArrayType):
            return f"[{here}]{self.base._indexes}"
        else:
            return f"[{here}]"

    @property
    def full_indexed(self) -> ValueType:
        "To get the ultimate type of an array, e.g. full_indexed(real[][2]) == real."
        return self.base.full_indexed if isinstance(self.base, ArrayType) else self.base

    @property
    def dim(self) -> int:
        "To get the nesting depth of an array."
        return self.base.dim + 1 if isinstance(self.base, ArrayType) else 1

    def coerce(self, value: Any) -> Any:
        if not isinstance(value, list):
            raise CoercionError(describe(value))
        if self.length is not None and len(value) != self.length:
            raise CoercionError(describe(value))
        return [self.base.coerce(item) for item in value]

    def __eq__(self, o: object) -> bool:
        if (
            isinstance(o, type(self))
            and o.length == self.length
            and o.base == self.base
        ):
            return True
        else:
            return False

    def __str__(self) -> str:
        return f"{self.full_indexed}{self._indexes}"

    @classmethod
    def multidim(cls, base: ValueType, *dims: Optional[int]) -> ValueType:
        "To quickly generate a nested array, outermost length first."
        if dims:
            return cls(cls.multidim(base, *dims[1:]), dims[0])
        else:
            return base
