"""Exception types shared across the package.

All errors derive from ValueError (via KetSimError) so generic callers can
catch broadly while tests distinguish the specific failure.
"""


class KetSimError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidInputError(KetSimError):
    """Malformed argument: bad bit-string, out-of-range index, bad spec."""


class DimensionMismatchError(KetSimError):
    """Operands live in spaces of different qubit counts."""


class NormalizationError(KetSimError):
    """State weights do not satisfy the unit-norm requirement."""


class ZeroStateError(KetSimError):
    """An all-zero amplitude vector cannot represent a quantum state."""


class AnnihilatedStateError(KetSimError):
    """Operator application produced the zero vector (normalization factor ~ 0)."""


class ResourceLimitError(KetSimError):
    """Dense materialization would exceed the configured size guard."""


class ParseError(KetSimError):
    """Syntax or resolution failure in a Dirac expression.

    Carries the 0-based character position of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ContextRequiredError(ParseError):
    """Decimal ket labels were used without a qubit-count hint."""
