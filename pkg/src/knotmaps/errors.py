"""Exception hierarchy.

Validation failures raise subclasses of :class:`ValidationError`; resource
and budget failures raise subclasses of :class:`BudgetError`.  The CLI maps
these two families to exit codes 2 and 3 respectively.
"""


class KnotmapsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(KnotmapsError, ValueError):
    """Structurally invalid input (bad matching, wrong arity, parse error...)."""


class BudgetError(KnotmapsError, RuntimeError):
    """A configured limit or budget was exceeded."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of the operation (e.g. n < 1)."""


class InvalidMatching(ValidationError):
    """Edge matching does not cover every arc exactly once."""


class Disconnected(ValidationError):
    """Underlying graph of the map is not connected."""


class NonPlanar(ValidationError):
    """Rotation system does not embed in the sphere (face count != n + 2)."""


class InvalidRoot(ValidationError):
    """Root arc is out of range or not an arc of the map."""


class MissingRoot(ValidationError):
    """Operation requires a rooted diagram but none was given."""


class ArcOutOfRange(ValidationError):
    """Arc index does not belong to the diagram."""


class UnknownEdge(ValidationError):
    """Edge is not present in the diagram."""


class UnknownCrossing(ValidationError):
    """Crossing index is not present in the diagram."""


class ParseError(ValidationError):
    """Malformed KDT text.

    Attributes:
        line: 1-based line number of the offending token.
        column: 1-based column number.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column else "") + ")"
        super().__init__(message + where)


class NonPlanarComposition(ValidationError):
    """Tangle composition produced a non-planar rotation system."""


class ExteriorFaceViolation(ValidationError):
    """Exterior arcs of a composed tangle do not all lie on one face."""


class ArityMismatch(ValidationError):
    """Tangles have different numbers of exterior arcs."""


class StrandCountMismatch(ValidationError):
    """Tangle does not have the number of open strands the operation needs."""


class NotTwoLegPrime(ValidationError):
    """Tangle fails the two-leg-prime (bridgeless interior) requirement."""


class NotPrime(ValidationError):
    """Diagram fails the primality requirement."""


class NotInImage(ValidationError):
    """Map is not in the image of the composition being inverted."""


class OccurrenceNotFound(ValidationError):
    """Pattern occurrence could not be located for detachment."""


class NoKnotPreservingArc(KnotmapsError):
    """No insertion arc at this crossing preserves the knot property."""


class LimitExceeded(BudgetError):
    """Enumeration size limit exceeded."""


class CrossingBudgetExceeded(BudgetError):
    """Diagram still above the skein budget after simplification."""


class ColumnMissing(ValidationError):
    """Chart spec references a CSV column that does not exist."""


class EmptyData(ValidationError):
    """Chart input contains no data rows."""
