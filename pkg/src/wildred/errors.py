"""Exception hierarchy; each family maps to one CLI exit code."""


class WildredError(Exception):
    exit_code = 1


class ValidationError(WildredError, ValueError):
    """Malformed input or misuse of an operation."""

    exit_code = 2


class ClassificationError(ValidationError):
    """Input is not untwisted semisimple where that is required."""


class UnsupportedConfiguration(WildredError):
    exit_code = 3


class ResonantObstruction(UnsupportedConfiguration):
    def __init__(self, degree: int, coker_dim: int, msg: str = ""):
        self.degree = degree
        self.coker_dim = coker_dim
        super().__init__(msg or f"resonant obstruction at degree {degree} (cokernel dim {coker_dim})")


class CellMiss(UnsupportedConfiguration):
    """Element outside the big cell (chart miss)."""


class DegenerateForm(WildredError, ArithmeticError):
    exit_code = 3


class InvariantViolation(WildredError):
    exit_code = 4
