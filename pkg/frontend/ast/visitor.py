"""
Base type of the phases that walk a scenario AST. Every `visitX` falls back
to `visitOther`, so a phase overrides only the nodes it cares about.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Protocol, Sequence, TypeVar

if TYPE_CHECKING:
    from .node import Node, NullType
    from .tree import *

T = TypeVar("T", covariant=True)
U = TypeVar("U", covariant=True)


class Visitor(Protocol[T, U]):  # type: ignore
    def visitOther(self, node: Node, ctx: T) -> None:
        return None

    def visitNULL(self, that: NullType, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitScenario(self, that: Scenario, ctx: T) -> Optional[Sequence[Optional[U]]]:
        return self.visitOther(that, ctx)

    def visitSection(self, that: Section, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitEntryList(self, that: EntryList, ctx: T) -> Optional[Sequence[Optional[U]]]:
        return self.visitOther(that, ctx)

    def visitEntry(self, that: Entry, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitListValue(self, that: ListValue, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitUnary(self, that: Unary, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitBinary(self, that: Binary, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitCall(self, that: Call, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitIdentifier(self, that: Identifier, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitIntLiteral(self, that: IntLiteral, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitRealLiteral(self, that: RealLiteral, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)

    def visitBoolLiteral(self, that: BoolLiteral, ctx: T) -> Optional[U]:
        return self.visitOther(that, ctx)
