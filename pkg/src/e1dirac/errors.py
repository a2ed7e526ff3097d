"""Exception hierarchy shared by every layer of the package.

Each class carries a short machine-readable ``code`` that the command line
front end copies into its reports.
"""

from __future__ import annotations


class E1Error(Exception):
    code = "error"


class DomainError(E1Error, ArithmeticError):
    """Evaluation hit a singular point (division by zero, log of x <= 0)."""

    code = "domain_error"

    def __init__(self, message: str, node=None):
        self.node = node
        if node is not None:
            message = f"{message} in subexpression '{node}'"
        super().__init__(message)


class ExprSyntaxError(E1Error, ValueError):
    code = "syntax_error"

    def __init__(self, message: str, column: int, text: str = ""):
        self.column = column
        self.text = text
        super().__init__(f"{message} at column {column}")


class UnknownIdentifier(ExprSyntaxError):
    code = "unknown_identifier"

    def __init__(self, name: str, column: int, text: str = ""):
        self.name = name
        E1Error.__init__(self, f"unknown identifier '{name}' at column {column}")
        self.column = column
        self.text = text


class ChartMismatch(E1Error, ValueError):
    code = "chart_mismatch"


class UnsupportedDegree(E1Error, ValueError):
    code = "unsupported_degree"


class NotIntegrable(E1Error):
    code = "not_integrable"


class IllConditioned(E1Error):
    """A rank decision falls too close to the zero threshold to be trusted."""

    code = "ill_conditioned"

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class SingularSystem(E1Error):
    code = "singular_system"

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class StepFailure(E1Error):
    code = "step_failure"


class RankDrop(E1Error):
    code = "rank_drop"


# numerical refusals share one exit status in the command line tool
NUMERICAL_REFUSALS = (IllConditioned, SingularSystem, StepFailure, RankDrop)


class ScenarioError(E1Error, ValueError):
    """A located problem in a scenario file (1-based line and column)."""

    code = "scenario_error"

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class ParseError(ScenarioError):
    code = "parse_error"


class UnknownCoordinate(ScenarioError):
    code = "unknown_coordinate"


class DimensionMismatch(ScenarioError):
    code = "dimension_mismatch"


# problems with the input itself
INPUT_ERRORS = (ScenarioError, ExprSyntaxError, ChartMismatch, UnsupportedDegree)
