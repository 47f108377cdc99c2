"""Exception hierarchy for the quantumness witness toolkit.

Errors raised from model validators do not derive from ValueError, so pydantic
passes them through instead of folding them into a ValidationError.
"""


class QuantumWitnessError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(QuantumWitnessError):
    """Operands act on Hilbert spaces of different dimension."""


class InvalidStateError(QuantumWitnessError):
    """Matrix is not a valid density matrix or vector is not normalized."""


class InvalidMeasurementError(QuantumWitnessError):
    """Effect set is not a POVM, or a rank-1 projective measurement was required."""


class ShapeMismatchError(QuantumWitnessError):
    """Vectors or probability tables have incompatible shapes."""


class UnsupportedBoundError(QuantumWitnessError, ValueError):
    """Requested bound is undefined for the given overlap or entropy kind."""


class OptimizerError(QuantumWitnessError, RuntimeError):
    """State-space search could not be set up (empty state set, oversized grid)."""


class FixtureSchemaError(QuantumWitnessError, ValueError):
    """Fixture file does not match the expected table schema."""

    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        self.line = line
        self.column = column
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
