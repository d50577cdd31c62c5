"""
Types of scenario values. There are three kinds of types:
    built-in types: real, int, bool, name
    choice types: one name out of a fixed set, e.g. distance | displacement
    array types: list of a base type, of fixed or free length (may be nested)
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Optional


class CoercionError(Exception):
    def __init__(self, got: str) -> None:
        super().__init__(got)
        self.got = got


def describe(value: Any) -> str:
    "Short description of an evaluated value, used in mismatch messages."
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "real"
    if isinstance(value, str):
        return f"name '{value}'"
    if isinstance(value, list):
        return f"list of length {len(value)}"
    return type(value).__name__


class ValueType(ABC):
    def is_base(self):
        return False

    def is_array(self):
        return False

    @property
    def indexed(self) -> Optional[ValueType]:
        return None

    # To convert an evaluated value into this type; raises `CoercionError` on mismatch.
    @abstractmethod
    def coerce(self, value: Any) -> Any:
        raise NotImplementedError

    @abstractmethod
    def __eq__(self, o: object) -> bool:
        raise NotImplementedError

    @abstractmethod
    def __str__(self) -> str:
        raise NotImplementedError
