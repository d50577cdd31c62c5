"""
Every error raised by the scenario pipeline or the numeric backend.

The class attribute `exitCode` is what `main.py` returns to the shell:
    2: the scenario (or a numeric configuration derived from it) is invalid
    3: the simulation blew up
    4: a gain certificate inequality failed
    1: anything else (file system, failed property suites)
"""

from typing import Optional, Sequence

from utils import find_column


class FormationError(Exception):
    exitCode = 1


class ScenarioError(FormationError):
    exitCode = 2


class ScenarioLexError(ScenarioError):
    def __init__(self, t) -> None:
        super().__init__(
            f"Lex error: invalid token at line {t.lineno}, column {find_column(t.lexer.lexdata, t.lexpos)}"
        )
        self.token = t


class ScenarioSyntaxError(ScenarioError):
    def __init__(self, t, extra: Optional[str] = None) -> None:
        if t is not None:
            msg = (
                f"Syntax error: line {t.lineno}, column {find_column(t.lexer.lexdata, t.lexpos)}"
                + (extra or "")
            )
        else:
            msg = f"Syntax error: " + (extra or "")
        super().__init__(msg)
        self.token = t


class ScenarioMissingSectionError(ScenarioError):
    def __init__(self, section: str) -> None:
        super().__init__("Validation error: missing %s section" % section)
        self.section = section


class ScenarioUnknownSectionError(ScenarioError):
    def __init__(self, section: str) -> None:
        super().__init__("Validation error: unknown section '%s'" % section)
        self.section = section


class ScenarioDuplicateSectionError(ScenarioError):
    def __init__(self, section: str) -> None:
        super().__init__("Validation error: section '%s' is defined twice" % section)
        self.section = section


class ScenarioUnknownKeyError(ScenarioError):
    def __init__(self, section: str, key: str) -> None:
        super().__init__("Validation error: unknown key '%s.%s'" % (section, key))
        self.section = section
        self.key = key


class ScenarioDuplicateKeyError(ScenarioError):
    def __init__(self, section: str, key: str) -> None:
        super().__init__("Validation error: key '%s.%s' is given twice" % (section, key))
        self.section = section
        self.key = key


class ScenarioMissingFieldError(ScenarioError):
    def __init__(self, section: str, key: str) -> None:
        super().__init__("Validation error: missing field '%s.%s'" % (section, key))
        self.section = section
        self.key = key


class ScenarioTypeMismatchError(ScenarioError):
    def __init__(self, section: str, key: str, expected: str, got: str) -> None:
        super().__init__(
            "Validation error: '%s.%s' expects %s, got %s" % (section, key, expected, got)
        )
        self.section = section
        self.key = key


class ScenarioBadValueError(ScenarioError):
    def __init__(self, section: str, key: str, reason: str) -> None:
        super().__init__("Validation error: bad value for '%s.%s': %s" % (section, key, reason))
        self.section = section
        self.key = key


class ScenarioBadEdgeError(ScenarioError):
    def __init__(self, index: int, reason: str) -> None:
        super().__init__("Validation error: edge %d %s" % (index, reason))
        self.index = index


class ScenarioDimensionError(ScenarioError):
    def __init__(self, reason: str) -> None:
        super().__init__("Validation error: inconsistent dimensions: " + reason)


class ScenarioValidationError(ScenarioError):
    """
    Several field-precise errors reported together.
    """

    def __init__(self, errors: Sequence[Exception]) -> None:
        super().__init__("\n".join(map(str, errors)))
        self.errors = list(errors)


class ConfigurationError(ScenarioError, ValueError):
    def __init__(self, reason: str) -> None:
        super().__init__("Configuration error: " + reason)


class FrameMismatchError(ConfigurationError):
    def __init__(self, agent: int) -> None:
        super().__init__(
            "displacement formations need a common orientation, but agent %d has a rotated base frame"
            % agent
        )
        self.agent = agent


class UsageError(ScenarioError, ValueError):
    def __init__(self, reason: str) -> None:
        super().__init__("Usage error: " + reason)


class SimulationBlowUpError(FormationError):
    exitCode = 3

    def __init__(self, t: float, agent: Optional[int], detail: str) -> None:
        where = "" if agent is None else " at agent %d" % agent
        super().__init__("Simulation error: t = %.6g s%s: %s" % (t, where, detail))
        self.t = t
        self.agent = agent


class CertificateFailure(FormationError):
    exitCode = 4

    def __init__(self, failed: Sequence[str]) -> None:
        super().__init__("Certificate error: failed inequalities: " + ", ".join(failed))
        self.failed = list(failed)


class TraceIOError(FormationError):
    def __init__(self, path: str, reason: str) -> None:
        super().__init__("IO error: %s: %s" % (path, reason))
        self.path = path
