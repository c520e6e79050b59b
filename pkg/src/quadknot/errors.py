"""Exception hierarchy.

Every error carries a short upper-case ``code`` so the CLI and the batch
harness can report failures without string matching on messages.
"""

from __future__ import annotations


class QuadknotError(Exception):
    code = "ERROR"


class DegenerateError(QuadknotError):
    """Input sits inside a tolerance guard band (general position violated)."""

    code = "DEGENERATE"


class SegmentInPlaneError(DegenerateError):
    code = "SEGMENT_IN_PLANE"


class DegenerateLineError(QuadknotError):
    code = "DEGENERATE_LINE"


class PlanesParallelError(DegenerateError):
    code = "PLANES_PARALLEL"


class NonGenericError(DegenerateError):
    code = "NON_GENERIC"


class SelfIntersectionError(QuadknotError):
    """A closed polygon is not embedded.

    ``pair`` holds the indices of the first offending pair of edges and
    ``point`` an approximate location of the collision.
    """

    code = "SELF_INTERSECTING"

    def __init__(self, message, pair=None, point=None):
        super().__init__(message)
        self.pair = pair
        self.point = point


class EmptyError(QuadknotError):
    code = "EMPTY"


class MoreThanTwoAdjacentError(QuadknotError):
    code = "MORE_THAN_TWO_ADJACENT"


class TooManyCrossingsError(QuadknotError):
    code = "TOO_MANY_CROSSINGS"


class NoGenericDirectionError(QuadknotError):
    code = "NO_GENERIC_DIRECTION"


class RejectBudgetExhausted(QuadknotError):
    code = "REJECT_BUDGET_EXHAUSTED"

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class PropertyViolated(QuadknotError):
    code = "PROPERTY_VIOLATED"


class InfiniteFamilyError(QuadknotError):
    """A whole continuous family of lines meets the knot in four or more components."""

    code = "INFINITE_FAMILY"
