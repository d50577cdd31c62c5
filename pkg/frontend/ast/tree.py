"""
Module that defines all AST nodes of the scenario language.

    scenario      := section*
    section       := name [index] { entry* }
    entry         := key = value ;
    value         := expression | [ value, ... ]
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Generic, Optional, TypeVar, Union

from utils import T, U

from .node import NULL, BinaryOp, Node, NullType, UnaryOp

if TYPE_CHECKING:
    from .visitor import Visitor

_T = TypeVar("_T", bound=Node)


def _index_len_err(i: int, node: Node):
    return IndexError(
        f"you are trying to index the #{i} child of node {node.name}, which has only {len(node)} children"
    )


class ListNode(Node, Generic[_T]):
    """
    Abstract node type that represents a node sequence.
    """

    def __init__(self, name: str, children: list[_T]) -> None:
        super().__init__(name)
        self.children = children

    def __getitem__(self, key: int) -> Node:
        return self.children.__getitem__(key)

    def __len__(self) -> int:
        return len(self.children)

    def accept(self, v: Visitor[T, U], ctx: T):
        ret = tuple(node.accept(v, ctx) for node in self)
        return None if ret.count(None) == len(ret) else ret


class Scenario(ListNode["Section"]):
    """
    AST root: the sections of one scenario file, in file order.
    """

    def __init__(self, *children: Section) -> None:
        super().__init__("scenario", list(children))

    def sections(self, name: str) -> list[Section]:
        return [section for section in self if section.ident.value == name]

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitScenario(self, ctx)


class Section(Node):
    """
    AST node of a section, e.g. `graph { ... }` or `agent 2 { ... }`.
    """

    def __init__(
        self,
        ident: Identifier,
        index: Union[IntLiteral, NullType],
        body: EntryList,
    ) -> None:
        super().__init__("section")
        self.ident = ident
        self.index = index
        self.body = body

    @property
    def key(self) -> str:
        "Unique name of the section, `agent#2` for indexed sections."
        if self.index is NULL:
            return self.ident.value
        return f"{self.ident.value}#{self.index.value}"

    def __getitem__(self, key: int) -> Node:
        return (self.ident, self.index, self.body)[key]

    def __len__(self) -> int:
        return 3

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitSection(self, ctx)


class EntryList(ListNode["Entry"]):
    def __init__(self, *children: Entry) -> None:
        super().__init__("entries", list(children))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitEntryList(self, ctx)


class Entry(Node):
    """
    AST node of `key = value;`.
    """

    def __init__(self, key: Identifier, value: Value) -> None:
        super().__init__("entry")
        self.key = key
        self.value = value

    def __getitem__(self, key: int) -> Node:
        return (self.key, self.value)[key]

    def __len__(self) -> int:
        return 2

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitEntry(self, ctx)


class Value(Node):
    """
    Abstract type that represents an entry value: an expression or a list.
    """

    def __init__(self, name: str) -> None:
        super().__init__(name)
        self.lineno: Optional[int] = None


class ListValue(Value, ListNode[Value]):
    def __init__(self, *children: Value) -> None:
        ListNode.__init__(self, "list", list(children))
        self.lineno = None

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitListValue(self, ctx)


class Expression(Value):
    pass


class Unary(Expression):
    def __init__(self, op: UnaryOp, operand: Expression) -> None:
        super().__init__(f"unary({op.value})")
        self.op = op
        self.operand = operand

    def __getitem__(self, key: int) -> Node:
        if key == 0:
            return self.operand
        raise _index_len_err(key, self)

    def __len__(self) -> int:
        return 1

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitUnary(self, ctx)


class Binary(Expression):
    def __init__(self, op: BinaryOp, lhs: Expression, rhs: Expression) -> None:
        super().__init__(f"binary({op.value})")
        self.op = op
        self.lhs = lhs
        self.rhs = rhs

    def __getitem__(self, key: int) -> Node:
        return (self.lhs, self.rhs)[key]

    def __len__(self) -> int:
        return 2

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitBinary(self, ctx)


class Call(Expression):
    """
    AST node of a builtin function call, e.g. `sqrt(2)`.
    """

    def __init__(self, ident: Identifier, argument: Expression) -> None:
        super().__init__("call")
        self.ident = ident
        self.argument = argument

    def __getitem__(self, key: int) -> Node:
        return (self.ident, self.argument)[key]

    def __len__(self) -> int:
        return 2

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitCall(self, ctx)


class Identifier(Expression):
    """
    A bare name: a symbolic value such as `distance`, a constant such as `pi`,
    or a section/key name.
    """

    def __init__(self, value: str) -> None:
        super().__init__("identifier")
        self.value = value

    def __getitem__(self, key: int) -> Node:
        raise _index_len_err(key, self)

    def __len__(self) -> int:
        return 0

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitIdentifier(self, ctx)

    def __str__(self) -> str:
        return f"identifier({self.value})"


class Literal(Expression):
    def __init__(self, name: str, value) -> None:
        super().__init__(name)
        self.value = value

    def __getitem__(self, key: int) -> Node:
        raise _index_len_err(key, self)

    def __len__(self) -> int:
        return 0

    def __str__(self) -> str:
        return f"{self.name}({self.value})"


class IntLiteral(Literal):
    def __init__(self, value: Union[int, str]) -> None:
        super().__init__("int", int(value))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitIntLiteral(self, ctx)


class RealLiteral(Literal):
    def __init__(self, value: Union[float, str]) -> None:
        super().__init__("real", float(value))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitRealLiteral(self, ctx)


class BoolLiteral(Literal):
    def __init__(self, value: bool) -> None:
        super().__init__("bool", bool(value))

    def accept(self, v: Visitor[T, U], ctx: T):
        return v.visitBoolLiteral(self, ctx)
