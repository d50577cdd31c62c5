"""
A symbol is a name the scenario schema knows: a section kind or a field of one.
Sections carry no value type; fields carry the type their value is coerced to.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional

from frontend.type.type import ValueType


class Symbol(ABC):
    def __init__(self, name: str, type: Optional[ValueType]) -> None:
        self.name = name
        self.type = type

    @abstractmethod
    def __str__(self) -> str:
        raise NotImplementedError()
