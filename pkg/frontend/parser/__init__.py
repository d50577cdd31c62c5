"""
The scenario parser, built by `ply.yacc` from the grammar in `ply_parser`.
`parse` returns the raw AST; names and values are checked by later phases.
"""

from typing import Optional, Protocol, cast

from frontend.ast.tree import Scenario
from frontend.lexer import Lexer
from utils.error import ScenarioSyntaxError

from .ply_parser import parser as _parser


class Parser(Protocol):
    error_stack: list[ScenarioSyntaxError]

    def parse(self, input: str, lexer: Optional[Lexer] = None) -> Scenario:
        ...


parser = cast(Parser, _parser)

__all__ = [
    "parser",
]
