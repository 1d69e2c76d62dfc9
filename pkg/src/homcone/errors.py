"""Exception types shared across the package."""


class HomconeError(Exception):
    """Base class for all domain errors."""


class ParseError(HomconeError):
    """Malformed input file or payload."""


class DimensionMismatch(HomconeError):
    """Element components do not conform to the algebra's bigradation."""


class NotHermitian(HomconeError):
    """Operation requires an element fixed by the involution."""


class NotSymmetric(HomconeError):
    """Dense matrix input is not symmetric."""


class NotInvertible(HomconeError):
    """Triangular element has a non-positive diagonal entry."""


class ImproperFactor(HomconeError):
    """Triangular factor is not proper, or its zero diagonal does not match
    the requested index set."""


class OutsideCone(HomconeError):
    """Point fails cone membership, so no face data can be produced."""


class ZeroInput(HomconeError):
    """Operation is undefined for the zero element."""


class RankTooLarge(HomconeError):
    """Enumeration refused: 2^rank would be too many principal faces."""


class BadIndex(HomconeError):
    """An index or index set is out of range."""


class BadDims(HomconeError):
    """Invalid block dimensions for an algebra constructor."""


class NotHomogeneousChordal(HomconeError):
    """Graph admits no trivially perfect elimination ordering.

    Carries a four-vertex witness: an induced path or induced four-cycle.
    """

    def __init__(self, kind: str, vertices: tuple):
        self.kind = kind
        self.vertices = tuple(vertices)
        super().__init__(
            f"graph is not homogeneous chordal: induced {kind} on vertices {sorted(self.vertices)}"
        )


class OrderingNotVerified(HomconeError):
    """Supplied ordering fails the elimination-ordering conditions."""


class NotCompletable(HomconeError):
    """Pattern matrix has no PSD completion."""


class RankDeficient(HomconeError):
    """Operation requires a full-rank (positive definite) completion."""


class CertificateMismatch(HomconeError):
    """Face certificate does not belong to the given problem data."""


class ExactArithmeticError(HomconeError):
    """Exact mode needed a square root that is irrational over the rationals."""
