"""
The namer phase: resolve every section and key of the scenario against the schema.

Unknown names and duplicates are errors (strict mode). Every entry gets its
`FieldSymbol` attached as attribute "symbol", every section its `SectionSymbol`.
Errors are collected and raised together.
"""

from frontend.ast.node import NULL
from frontend.ast.tree import *
from frontend.ast.visitor import Visitor
from frontend.scope.globalscope import GlobalScopeType
from frontend.scope.scope import Scope, ScopeKind
from frontend.scope.scopestack import ScopeStack
from frontend.symbol.sectionsymbol import SectionSymbol
from utils.error import *


class Namer(Visitor[ScopeStack, None]):
    def __init__(self) -> None:
        self.errors: list[ScenarioError] = []

    # Entry of this phase
    def transform(self, scenario: Scenario) -> Scenario:
        self.errors = []
        scenario.globalScope = GlobalScopeType()
        ctx = ScopeStack(scenario.globalScope)

        scenario.accept(self, ctx)
        if self.errors:
            raise ScenarioValidationError(self.errors)
        return scenario

    def visitScenario(self, scenario: Scenario, ctx: ScopeStack) -> None:
        for section in scenario:
            section.accept(self, ctx)

        # required sections and fields, reported in schema order
        for symbol in ctx.globalscope.schema.values():
            if symbol.required and not scenario.sections(symbol.name):
                self.errors.append(ScenarioMissingSectionError(symbol.name))

    def visitSection(self, section: Section, ctx: ScopeStack) -> None:
        name = section.ident.value
        symbol = ctx.globalscope.sectionSymbol(name)
        if symbol is None:
            self.errors.append(ScenarioUnknownSectionError(name))
            return

        if symbol.indexed and section.index is NULL:
            self.errors.append(ScenarioBadValueError(name, "<index>", "an index is required"))
            return
        if not symbol.indexed and section.index is not NULL:
            self.errors.append(ScenarioBadValueError(name, "<index>", "no index is allowed"))
            return

        if ctx.findConflict(section.key):
            self.errors.append(ScenarioDuplicateSectionError(section.key))
            return
        ctx.declare(symbol, section.key)
        section.setattr("symbol", symbol)

        ctx.open(Scope(ScopeKind.SECTION, section.key))
        section.body.accept(self, ctx)
        ctx.close()

        for field in symbol.requiredFields():
            if not any(entry.key.value == field.name for entry in section.body):
                self.errors.append(ScenarioMissingFieldError(section.key, field.name))

    def visitEntryList(self, entries: EntryList, ctx: ScopeStack) -> None:
        for entry in entries:
            entry.accept(self, ctx)

    def visitEntry(self, entry: Entry, ctx: ScopeStack) -> None:
        scope = ctx.currentScope()
        section: SectionSymbol = ctx.globalscope.get(scope.name)
        key = entry.key.value

        field = section.field(key)
        if field is None:
            self.errors.append(ScenarioUnknownKeyError(scope.name, key))
            return
        if ctx.findConflict(key):
            self.errors.append(ScenarioDuplicateKeyError(scope.name, key))
            return

        ctx.declare(field)
        entry.setattr("symbol", field)
