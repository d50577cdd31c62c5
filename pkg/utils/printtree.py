"""
Writes a checked scenario tree back out in normalized form: sections in
schema order (agents by index), keys in schema order, every value folded to a
constant and reals written with repr. Parsing the output gives the same
scenario as parsing the input.
"""

from typing import Any

from frontend.ast.tree import Scenario, Section
from frontend.scope.globalscope import SCHEMA


class ScenarioPrinter:
    def __init__(self, indentLen=4) -> None:
        self.indentLen = indentLen
        self.indentNum = 0
        self.lines: list[str] = []

    def work(self, scenario: Scenario) -> str:
        self.lines = []
        for schema in SCHEMA:
            sections = scenario.sections(schema.name)
            sections.sort(key=lambda section: section.index.value if section.index else 0)
            for section in sections:
                self.printSection(section, list(schema.fields))
        return "\n".join(self.lines) + ("\n" if self.lines else "")

    def printSection(self, section: Section, order: list[str]) -> None:
        if self.lines:
            self.printLine("")
        index = f" {section.index.value}" if section.index else ""
        self.printLine(f"{section.ident.value}{index} {{")
        self.incIndent()
        entries = {entry.key.value: entry for entry in section.body}
        for key in order:
            if key in entries:
                self.printLine(f"{key} = {self.format(entries[key].getattr('value'))};")
        self.decIndent()
        self.printLine("}")

    def format(self, value: Any) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        if isinstance(value, list):
            return "[" + ", ".join(self.format(item) for item in value) + "]"
        return str(value)

    def outputIndent(self) -> str:
        return " " * self.indentLen * self.indentNum

    def printLine(self, s: str) -> None:
        self.lines.append(self.outputIndent() + s if s else "")

    def incIndent(self) -> None:
        self.indentNum += 1

    def decIndent(self) -> None:
        self.indentNum -= 1
