"""
The symbol table of the namer: the global scope at the bottom and, while the
entries of one section are resolved, that section's scope on top.
"""

from typing import Optional

from frontend.symbol.symbol import Symbol

from .scope import Scope


class ScopeStack:
    def __init__(self, globalscope: Scope) -> None:
        self.globalscope = globalscope
        self.stack = [globalscope]

    # The section being resolved, or the global scope between sections.
    def currentScope(self) -> Scope:
        return self.stack[-1]

    # Sections do not nest.
    def open(self, scope: Scope) -> None:
        assert len(self.stack) == 1, "section scopes do not nest"
        self.stack.append(scope)

    def close(self) -> None:
        if len(self.stack) > 1:
            self.stack.pop()

    def declare(self, symbol: Symbol, key: str = "") -> None:
        self.currentScope().declare(symbol, key)

    # Sections clash by key (`agent#2`), fields by name within their section.
    def findConflict(self, key: str) -> Optional[Symbol]:
        return self.currentScope().symbols.get(key)
