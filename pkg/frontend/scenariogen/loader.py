"""
The whole front end in one call: text -> tree -> checked tree -> Scenario.
"""

import logging
import os

from backend.scenario import Scenario as ScenarioIR
from frontend.ast.tree import Scenario
from frontend.lexer import lexer
from frontend.parser import parser
from frontend.typecheck.namer import Namer
from frontend.typecheck.typer import Typer
from utils.error import ScenarioError, ScenarioValidationError, TraceIOError

from .scenariogen import ScenarioGen

logger = logging.getLogger(__name__)


def _reset() -> None:
    # ply's lexer and parser are module singletons
    lexer.lineno = 1
    lexer.begin("INITIAL")
    lexer.error_stack.clear()
    parser.error_stack.clear()


def parse_tree(text: str) -> Scenario:
    "Parses and checks scenario text; entries carry their coerced values afterwards."
    _reset()
    tree: Scenario = parser.parse(text, lexer=lexer)

    errors: list[ScenarioError] = [*lexer.error_stack, *parser.error_stack]
    if errors:
        if len(errors) == 1:
            raise errors[0]
        raise ScenarioValidationError(errors)
    if tree is None:
        tree = Scenario()

    tree = Namer().transform(tree)
    return Typer().transform(tree)


def parse_scenario_text(text: str, name: str = "") -> ScenarioIR:
    scenario = ScenarioGen().transform(parse_tree(text), name)
    logger.debug("parsed %s", scenario)
    return scenario


def read_scenario(path: str) -> str:
    try:
        with open(path, "r") as f:
            return f.read()
    except OSError as e:
        raise TraceIOError(path, e.strerror or str(e))


def parse_scenario(path: str) -> ScenarioIR:
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_scenario_text(read_scenario(path), name)
