"""
A scope maps the names met so far to their symbols:
    global scope: one entry per section key, e.g. `graph` or `agent#3`
    section scope: one entry per field written inside that section
"""

from enum import Enum, auto, unique

from frontend.symbol.symbol import Symbol


@unique
class ScopeKind(Enum):
    GLOBAL = auto()
    SECTION = auto()


class Scope:
    def __init__(self, kind: ScopeKind, name: str = "") -> None:
        self.kind = kind
        self.name = name
        self.symbols: dict[str, Symbol] = {}

    def containsKey(self, key: str) -> bool:
        return key in self.symbols

    def get(self, key: str) -> Symbol:
        return self.symbols[key]

    # Indexed sections share a symbol, so they are declared under their key.
    def declare(self, symbol: Symbol, key: str = "") -> None:
        self.symbols[key or symbol.name] = symbol
