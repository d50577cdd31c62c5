from typing import TypeVar


def find_column(_input: str, lexpos: int):
    line_start = _input.rfind("\n", 0, lexpos)
    return lexpos - line_start


def get_line(_input: str, lineno: int):
    lines = _input.splitlines()
    return lines[lineno - 1] if 0 < lineno <= len(lines) else ""


T = TypeVar("T")
U = TypeVar("U")
