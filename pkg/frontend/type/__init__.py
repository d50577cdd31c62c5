from .array import ArrayType
from .builtin_type import BOOL, INT, NAME, REAL, BuiltinType, ChoiceType
from .type import CoercionError, ValueType

__all__ = [
    "ValueType",
    "BuiltinType",
    "ChoiceType",
    "ArrayType",
    "CoercionError",
    "REAL",
    "INT",
    "BOOL",
    "NAME",
]
