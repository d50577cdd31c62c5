"""
Base class `Node` of the scenario AST, the arithmetic operators a value
expression may use, and the empty node `NULL` that stands for a missing
section index.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum, unique
from typing import TYPE_CHECKING, Any, Optional, TypeVar

if TYPE_CHECKING:
    from .visitor import Visitor

T = TypeVar("T")
U = TypeVar("U", covariant=True)


class Operator(Enum):
    @classmethod
    def of(cls, symbol: str):
        "The operator spelled `symbol` in the source text."
        return cls(symbol)


@unique
class UnaryOp(Operator):
    Neg = "-"
    Pos = "+"


@unique
class BinaryOp(Operator):
    Add = "+"
    Sub = "-"
    Mul = "*"
    Div = "/"


class Node(ABC):
    """
    Base class of all AST nodes.

    Phases annotate nodes through `setattr`/`getattr`: the namer attaches the
    schema symbol of each section and entry, the typer the coerced value.
    """

    def __init__(self, name: str) -> None:
        self.name = name
        self._attrs: dict[str, Any] = {}

    @abstractmethod
    def __len__(self) -> int:
        raise NotImplementedError

    @abstractmethod
    def __getitem__(self, key: int) -> Node:
        raise NotImplementedError

    @abstractmethod
    def accept(self, v: Visitor[T, U], ctx: T) -> Optional[U]:
        raise NotImplementedError

    def setattr(self, name: str, value: Any) -> None:
        self._attrs[name] = value

    # None when the phase that sets `name` has not run.
    def getattr(self, name: str) -> Any:
        return self._attrs.get(name)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __bool__(self):
        return True

    def __str__(self) -> str:
        if len(self) == 0:
            return self.name
        return "{}[{}]".format(self.name, ", ".join(map(str, self)))

    __repr__ = __str__


class NullType(Node):
    def __init__(self) -> None:
        super().__init__("NULL")

    def __getitem__(self, key: int) -> Node:
        raise IndexError(key)

    def __len__(self) -> int:
        return 0

    def __bool__(self):
        return False

    def accept(self, v: Visitor[T, U], ctx: T) -> Optional[U]:
        return v.visitNULL(self, ctx)


NULL = NullType()
