"""
The typer phase: fold every entry value into a constant and check it against
the type of its field.

The folded, coerced value is attached to the entry as attribute "value".
Bare names evaluate to themselves unless they are one of the constants below.
"""

import math
from typing import Any

from frontend.ast.tree import *
from frontend.ast.visitor import Visitor
from frontend.symbol.fieldsymbol import FieldSymbol
from frontend.type.type import CoercionError, describe
from utils.error import *

CONSTANTS = {
    "pi": math.pi,
}

FUNCTIONS = {
    "sqrt": math.sqrt,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "deg": math.radians,
}


class _EvalError(Exception):
    ...


class Typer(Visitor[None, Any]):
    def __init__(self) -> None:
        self.errors: list[ScenarioError] = []

    # Entry of this phase
    def transform(self, scenario: Scenario) -> Scenario:
        self.errors = []
        for section in scenario:
            for entry in section.body:
                self.typeEntry(section, entry)
        if self.errors:
            raise ScenarioValidationError(self.errors)
        return scenario

    def typeEntry(self, section: Section, entry: Entry) -> None:
        field: FieldSymbol = entry.getattr("symbol")
        if field is None:
            return
        try:
            value = entry.value.accept(self, None)
        except _EvalError as e:
            self.errors.append(ScenarioBadValueError(section.key, field.name, str(e)))
            return
        try:
            entry.setattr("value", field.type.coerce(value))
        except CoercionError as e:
            self.errors.append(
                ScenarioTypeMismatchError(section.key, field.name, str(field.type), e.got)
            )

    def visitListValue(self, value: ListValue, ctx: None) -> list:
        return [item.accept(self, ctx) for item in value]

    def visitUnary(self, expr: Unary, ctx: None) -> float:
        operand = self._number(expr.operand.accept(self, ctx))
        return -operand if expr.op == UnaryOp.Neg else operand

    def visitBinary(self, expr: Binary, ctx: None) -> float:
        lhs = self._number(expr.lhs.accept(self, ctx))
        rhs = self._number(expr.rhs.accept(self, ctx))
        if expr.op == BinaryOp.Add:
            return lhs + rhs
        if expr.op == BinaryOp.Sub:
            return lhs - rhs
        if expr.op == BinaryOp.Mul:
            return lhs * rhs
        if rhs == 0:
            raise _EvalError("division by zero")
        return lhs / rhs

    def visitCall(self, expr: Call, ctx: None) -> float:
        func = FUNCTIONS.get(expr.ident.value)
        if func is None:
            raise _EvalError(f"unknown function '{expr.ident.value}'")
        argument = self._number(expr.argument.accept(self, ctx))
        try:
            return func(argument)
        except ValueError:
            raise _EvalError(f"{expr.ident.value}({argument}) is undefined")

    def visitIdentifier(self, ident: Identifier, ctx: None) -> Any:
        return CONSTANTS.get(ident.value, ident.value)

    def visitIntLiteral(self, literal: IntLiteral, ctx: None) -> int:
        return literal.value

    def visitRealLiteral(self, literal: RealLiteral, ctx: None) -> float:
        return literal.value

    def visitBoolLiteral(self, literal: BoolLiteral, ctx: None) -> bool:
        return literal.value

    def _number(self, value: Any):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _EvalError(f"arithmetic on {describe(value)}")
        return value
