"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` used by the CLI.
"""


class OrliczError(Exception):
    code = "Error"


class InvalidResolution(OrliczError, ValueError):
    code = "InvalidResolution"


class DimensionMismatch(OrliczError, ValueError):
    code = "DimensionMismatch"


class NonFiniteIntegrand(OrliczError, ValueError):
    code = "NonFiniteIntegrand"


class OriginNotInterior(OrliczError, ValueError):
    code = "OriginNotInterior"


class UnsupportedDimension(OrliczError, ValueError):
    code = "UnsupportedDimension"


class UnsupportedRepresentation(OrliczError, TypeError):
    code = "UnsupportedRepresentation"


class MissingCurvature(OrliczError, ValueError):
    code = "MissingCurvature"


class NotConvexProfile(OrliczError, ValueError):
    code = "NotConvexProfile"


class NotUnimodular(OrliczError, ValueError):
    code = "NotUnimodular"


class DegenerateSample(OrliczError, RuntimeError):
    code = "DegenerateSample"


class DomainError(OrliczError, ValueError):
    code = "DomainError"


class RangeError(OrliczError, ArithmeticError):
    code = "RangeError"


class ClassificationConflict(OrliczError, RuntimeError):
    code = "ClassificationConflict"


class NearDegenerate(OrliczError, ValueError):
    code = "NearDegenerate"


class IncompatibleGrids(OrliczError, ValueError):
    code = "IncompatibleGrids"


class UnclassifiedPhi(OrliczError, ValueError):
    code = "UnclassifiedPhi"


class MixedClassConflict(OrliczError, ValueError):
    code = "MixedClassConflict"


class PEqualsMinusN(OrliczError, ValueError):
    code = "PEqualsMinusN"


class UnknownSuite(OrliczError, KeyError):
    code = "UnknownSuite"

    def __str__(self):
        return Exception.__str__(self)


class ClassMismatch(OrliczError, ValueError):
    code = "ClassMismatch"


class ParseError(OrliczError, ValueError):
    code = "ParseError"
