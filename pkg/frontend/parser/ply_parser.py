"""
Module that defines the scenario parser using `ply.yacc`.
Each global function whose name starts with "p_" carries its grammar rule(s)
in the docstring and builds the AST bottom-up.

Refer to https://www.dabeaz.com/ply/ply.html for more details.
"""


import ply.yacc as yacc

from frontend.ast.tree import *
from frontend.lexer import lex
from utils import get_line
from utils.error import ScenarioSyntaxError

tokens = lex.tokens
error_stack = list[ScenarioSyntaxError]()


def unary(p):
    p[0] = Unary(UnaryOp.of(p[1]), p[2])


def binary(p):
    p[0] = Binary(BinaryOp.of(p[2]), p[1], p[3])


def p_empty(p: yacc.YaccProduction):
    """
    empty :
    """
    pass


def p_scenario(p):
    """
    scenario : sections
    """
    p[0] = Scenario(*p[1])


def p_sections(p):
    """
    sections : sections section
    """
    p[1].append(p[2])
    p[0] = p[1]


def p_sections_empty(p):
    """
    sections : empty
    """
    p[0] = []


def p_section(p):
    """
    section : Identifier LBrace entries RBrace
    """
    p[0] = Section(p[1], NULL, p[3])
    p[0].setattr("lineno", p.lineno(1))


def p_indexed_section(p):
    """
    section : Identifier Integer LBrace entries RBrace
    """
    p[0] = Section(p[1], p[2], p[4])
    p[0].setattr("lineno", p.lineno(1))


def p_entries(p):
    """
    entries : entries entry
    """
    p[1].children.append(p[2])
    p[0] = p[1]


def p_entries_empty(p):
    """
    entries : empty
    """
    p[0] = EntryList()


def p_entry(p):
    """
    entry : Identifier Assign value Semi
    """
    p[0] = Entry(p[1], p[3])
    p[0].setattr("lineno", p.lineno(1))


def p_value(p):
    """
    value : expression
        | list
    """
    p[0] = p[1]


def p_list(p):
    """
    list : LBracket items RBracket
        | LBracket items Comma RBracket
    """
    p[0] = ListValue(*p[2])


def p_list_empty(p):
    """
    list : LBracket RBracket
    """
    p[0] = ListValue()


def p_items(p):
    """
    items : items Comma value
    """
    p[1].append(p[3])
    p[0] = p[1]


def p_items_single(p):
    """
    items : value
    """
    p[0] = [p[1]]


def p_expression(p):
    """
    expression : additive
    """
    p[0] = p[1]


def p_additive(p):
    """
    additive : additive Plus multiplicative
        | additive Minus multiplicative
    """
    binary(p)


def p_multiplicative(p):
    """
    multiplicative : multiplicative Mul unary
        | multiplicative Div unary
    """
    binary(p)


def p_additive_multiplicative(p):
    """
    additive : multiplicative
    multiplicative : unary
    unary : primary
    """
    p[0] = p[1]


def p_unary(p):
    """
    unary : Minus unary
        | Plus unary
    """
    unary(p)


def p_primary(p):
    """
    primary : Integer
        | Real
        | True
        | False
        | Identifier
    """
    p[0] = p[1]


def p_brace_expression(p):
    """
    primary : LParen expression RParen
    """
    p[0] = p[2]


def p_call(p):
    """
    primary : Identifier LParen expression RParen
    """
    p[0] = Call(p[1], p[3])


def p_error(t):
    """
    Records the error and lets ply resynchronise on the next token.
    """
    if not t:
        error_stack.append(ScenarioSyntaxError(t, "unexpected end of file"))
        return

    line = get_line(t.lexer.lexdata, t.lineno)
    error_stack.append(ScenarioSyntaxError(t, f"\n{line}"))


parser = yacc.yacc(start="scenario", debug=False, write_tables=False)
parser.error_stack = error_stack  # type: ignore
