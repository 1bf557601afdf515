"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class PseudolinearError(Exception):
    """Base class for all library errors."""


# -- input problems (CLI exit code 2) -----------------------------------------


class InvalidInput(PseudolinearError):
    """The input does not describe a valid object."""


class MapError(InvalidInput):
    """A rotation system does not describe a plane map."""


class NonPlanarEmbedding(MapError):
    pass


class DanglingDart(MapError):
    pass


class MissingOuterFace(MapError):
    pass


class NotACycle(InvalidInput):
    pass


class VertexNotOnCycle(InvalidInput):
    pass


class UnknownVertex(InvalidInput):
    pass


class VertexNotOnOuterFace(InvalidInput):
    pass


class NoSharedFace(InvalidInput):
    pass


class UnknownEdge(InvalidInput):
    pass


class GeneralPositionViolation(InvalidInput):
    """Base for geometric ingestion failures."""


class OverlapViolation(GeneralPositionViolation):
    pass


class TangencyViolation(GeneralPositionViolation):
    pass


class SelfCrossViolation(GeneralPositionViolation):
    pass


class SchemaError(InvalidInput):
    """A drawing document failed validation.

    Attributes:
        pointer: JSON-pointer style location of the offending value.
    """

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


class NotGood(InvalidInput):
    """The drawing is not a good drawing."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class NotComplete(InvalidInput):
    pass


class EndsAlternate(InvalidInput):
    pass


class ObstructionPresent(InvalidInput):
    pass


class NoObstruction(InvalidInput):
    pass


# -- engine problems ----------------------------------------------------------


class CapExceeded(PseudolinearError):
    """The brute-force oracle refused an instance above its vertex cap."""


class InternalInconsistency(PseudolinearError):
    """A result failed its own verification; signals a bug."""


class StepBudgetExceeded(InternalInconsistency):
    pass


class EquivalenceViolated(InternalInconsistency):
    pass
