"""
Built-in types: real, int, bool, name; plus choice types over a set of names.
"""

from typing import Any

from .type import CoercionError, ValueType, describe


class BuiltinType(ValueType):
    def __init__(self, name: str) -> None:
        super().__init__()
        self.name = name

    def is_base(self):
        return True

    def coerce(self, value: Any) -> Any:
        if self.name == "real":
            # ints widen to reals, bools never do
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                return float(value)
        elif self.name == "int":
            if isinstance(value, int) and not isinstance(value, bool):
                return value
        elif self.name == "bool":
            if isinstance(value, bool):
                return value
        elif self.name == "name":
            if isinstance(value, str):
                return value
        raise CoercionError(describe(value))

    def __eq__(self, o: object) -> bool:
        if isinstance(o, BuiltinType) and self.name == o.name:
            return True
        return False

    def __str__(self) -> str:
        return self.name


class ChoiceType(BuiltinType):
    def __init__(self, *choices: str) -> None:
        super().__init__("name")
        self.choices = tuple(choices)

    def coerce(self, value: Any) -> Any:
        if isinstance(value, str) and value in self.choices:
            return value
        raise CoercionError(describe(value))

    def __eq__(self, o: object) -> bool:
        return isinstance(o, ChoiceType) and self.choices == o.choices

    def __str__(self) -> str:
        return " | ".join(self.choices)


REAL = BuiltinType("real")
INT = BuiltinType("int")
BOOL = BuiltinType("bool")
NAME = BuiltinType("name")
