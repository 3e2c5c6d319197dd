"""
Exception hierarchy for heightcensus.

Input problems a caller can fix derive from ``CensusInputError`` (a
``ValueError``); broken internal contracts derive from
``CensusInternalError``. The CLI maps the first family to exit code 2.
"""

type Position = int


class HeightCensusError(Exception):
    """Base class for every error raised by heightcensus."""


class CensusInputError(HeightCensusError, ValueError):
    """Raised for invalid caller input."""


class CensusInternalError(HeightCensusError, RuntimeError):
    """Raised when an internal contract or consistency check fails."""


class ElementParseError(CensusInputError):
    """
    Reports malformed element, polynomial, triple or bound text.

    Keeps the offending document and a character position so messages can
    point at the exact column.
    """

    def __init__(self, msg: str, doc: str = "", pos: Position = 0) -> None:
        if not isinstance(msg, str):
            raise TypeError("msg must be a string")
        if not isinstance(pos, int) or pos < 0:
            raise ValueError("pos must be a non-negative integer")

        self.msg = msg
        self.doc = doc
        self.pos = pos
        self.colno = pos + 1

        super().__init__(f"{msg} at column {self.colno}: {doc!r}")


class FieldError(CensusInputError):
    """Invalid field context or element foreign to the context."""


class FieldMismatchError(FieldError):
    """Operands live in different field contexts."""


class PlaceError(CensusInputError):
    """Place unsupported by the requested operation."""


class ZeroElementError(CensusInputError):
    """Zero given where a nonzero element is required."""


class InvalidTripleError(CensusInputError):
    """The zero triple, which is not a point of P(2,3,4)."""


class NonIntegralError(CensusInputError):
    """Coordinates are not integral where integrality is required."""


class OffCurveError(CensusInputError):
    """A point does not satisfy its curve equation."""


class ConfigError(CensusInputError):
    """Invalid experiment or command-line configuration."""


class ContractError(CensusInternalError):
    """A caller-declared contract (scaling invariance) was violated."""


class ConsistencyError(CensusInternalError):
    """An internal consistency identity does not hold."""


__all__ = [
    "CensusInputError",
    "CensusInternalError",
    "ConfigError",
    "ConsistencyError",
    "ContractError",
    "ElementParseError",
    "FieldError",
    "FieldMismatchError",
    "HeightCensusError",
    "InvalidTripleError",
    "NonIntegralError",
    "OffCurveError",
    "PlaceError",
    "ZeroElementError",
]
