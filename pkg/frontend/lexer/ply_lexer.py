"""
Module that defines the scenario lexer using `ply.lex`.
Literals and identifiers are turned into AST leaves right here.
"""

from functools import wraps
from typing import List

import ply.lex as lex

from frontend.ast import tree
from utils.error import ScenarioLexError

from .lex import *

error_stack: List[ScenarioLexError] = []


def t_error(t):
    error_stack.append(ScenarioLexError(t))
    t.lexer.skip(1)


def _identifier_into_node(f):
    @wraps(f)
    def wrapped(t):
        t = f(t)
        if t.type == "Identifier":
            t.value = tree.Identifier(t.value)
        elif t.type in ("True", "False"):
            t.value = tree.BoolLiteral(t.type == "True")
        return t

    return wrapped


t_Identifier = _identifier_into_node(t_Identifier)


def _number_into_node(f):
    @wraps(f)
    def wrapped(t):
        t = f(t)
        if t.type == "Integer":
            t.value = tree.IntLiteral(t.value)
        else:
            t.value = tree.RealLiteral(t.value)
        return t

    return wrapped


t_Real = _number_into_node(t_Real)

lexer = lex.lex()
lexer.error_stack = error_stack  # type: ignore
