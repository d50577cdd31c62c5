"""
Module that lists out all lex tokens of the scenario language.
Add more tokens in the following way:

If the token is a syntactically valid identifier:
    add it into the `reserved` dictionary, where key is the token itself and value is token name.
Else:
    make it into a global variable or function that starts with "t_" and then the name of the token.

Refer to https://www.dabeaz.com/ply/ply.html for more details.
"""

# Reserved keywords
reserved = {
    "true": "True",
    "false": "False",
}

t_Semi = ";"
t_Comma = ","

t_LParen = "("
t_RParen = ")"
t_LBrace = "{"
t_RBrace = "}"
t_LBracket = "["
t_RBracket = "]"

t_Plus = "+"
t_Minus = "-"
t_Mul = "*"
t_Div = "/"
t_Assign = "="


# Integers and reals share one rule so that "1.5" never splits into "1" and ".5".
def t_Real(t):
    r"(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)(?:[eE][+-]?[0-9]+)?"
    if any(c in t.value for c in ".eE"):
        t.value = float(t.value)
    else:
        t.type = "Integer"
        t.value = int(t.value)
    return t


def t_Identifier(t):
    r"[a-zA-Z_][0-9a-zA-Z_]*"
    t.type = reserved.get(t.value, "Identifier")
    return t


# String patterns that should be ignored by the lexer.
def t_ignore_Newline(t):
    r"(?:\r\n?|\n)"
    t.lexer.lineno += 1


def t_ignore_BlockComment(t):
    r"/\*(?:.|\r|\n)*?\*/"
    t.lexer.lineno += t.value.count("\n")


t_ignore_Whitespace = r"[ \t]+"
t_ignore_LineComment = r"//[^\r\n]*"
t_ignore_HashComment = r"\#[^\r\n]*"


# Collection of all tokens.
tokens = tuple(
    name.removeprefix("t_")
    for name in globals()
    if name.startswith("t_") and not name.startswith("t_ignore_")
) + ("Integer",) + tuple(reserved.values())


def _escape():
    "Turns the plain string rules into regular expressions."

    import re

    token_dict = globals()
    for name in tokens:
        name = f"t_{name}"
        original = token_dict.get(name)
        if isinstance(original, str):
            token_dict[name] = re.escape(original)


_escape()
