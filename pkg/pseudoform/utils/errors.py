"""
Error hierarchy for pseudoform

Every domain failure raised by the library derives from PseudoformError, so the
CLI can map it to exit code 1 and report the class name verbatim. Errors carry
their context as attributes next to the message.
"""

from typing import Any, Optional


class PseudoformError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str = "", **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict:
        payload = {"error": type(self).__name__, "message": self.message}
        for key, value in self.context.items():
            payload[key] = value if isinstance(value, (int, str, bool, list, dict, type(None))) else repr(value)
        return payload


# Complex construction and lookup

class ComplexError(PseudoformError):
    pass


class DuplicateVertexInFacet(ComplexError):
    pass


class FaceNotPresent(ComplexError):
    pass


class VertexNotPresent(ComplexError):
    pass


class SizeLimitExceeded(ComplexError):
    pass


class NotPure(ComplexError):
    pass


class NotAFacet(ComplexError):
    pass


class MissingCoordinate(ComplexError):
    pass


# Structural predicates

class StructureError(PseudoformError):
    pass


class NotPseudomanifold(StructureError):
    pass


class NotNormal(StructureError):
    pass


class NotASurface(StructureError):
    pass


class NotACircleInSurface(StructureError):
    pass


class NotMissing(StructureError):
    pass


class CodimTooSmall(StructureError):
    pass


# Constructions

class ConstructionError(PseudoformError):
    pass


class NotAdmissible(ConstructionError):
    """Raised with the AdmissibilityReport that failed."""

    def __init__(self, message: str = "", report: Optional[Any] = None, **context: Any):
        super().__init__(message, **context)
        self.report = report


class PostconditionViolation(ConstructionError):
    pass


# Recognition

class RecognitionError(PseudoformError):
    pass


class VerdictMismatch(RecognitionError):
    pass


class NormalityViolation(RecognitionError):
    pass


class AnnulusCaseUnsupported(RecognitionError):
    pass


class ParityViolation(RecognitionError):
    pass


# Decomposition and builders

class DecompositionError(PseudoformError):
    pass


class DecompositionStuck(DecompositionError):
    def __init__(self, message: str = "", state: Optional[Any] = None, **context: Any):
        super().__init__(message, **context)
        self.state = state


class EmptyMultiset(DecompositionError):
    pass


class SearchExhausted(DecompositionError):
    pass


class G2Mismatch(DecompositionError):
    pass


class StructureViolation(DecompositionError):
    pass


class HypothesisNotMet(DecompositionError):
    pass


class BadParameters(PseudoformError, ValueError):
    pass
