"""
The scenario lexer. Errors do not stop a scan: they pile up on
`lexer.error_stack` and the loader reports them together with the parser's.
"""

from __future__ import annotations

from typing import Any, Iterator, Protocol

from utils.error import ScenarioLexError

from . import lex
from .ply_lexer import lexer as _lexer


class Lexer(Protocol):
    lexdata: str
    lexpos: int
    lineno: int
    error_stack: list[ScenarioLexError]

    def input(self, s: str) -> None:
        ...

    def token(self) -> Any:
        ...

    def __iter__(self) -> Iterator[Any]:
        ...


lexer: Lexer = _lexer

__all__ = [
    "lexer",
    "lex",
    "Lexer",
]
