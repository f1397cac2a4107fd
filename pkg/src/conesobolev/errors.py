"""Exception hierarchy shared by every module of the package."""


class ConeSobolevError(Exception):
    """Base class for all errors raised by :mod:`conesobolev`."""


class RangeViolation(ConeSobolevError, ValueError):
    """An exponent tuple violates one of the admissibility relations.

    The violated relation is available as ``relation`` (a short formula
    string such as ``"p < alpha+n"``).
    """

    def __init__(self, relation, message=None):
        self.relation = relation
        super().__init__(message or f"range violation: {relation} fails")


class DimensionMismatch(ConeSobolevError, ValueError):
    pass


class EmptyCone(ConeSobolevError):
    pass


class OutsideCone(ConeSobolevError, ValueError):
    pass


class NondifferentiablePoint(ConeSobolevError, ValueError):
    pass


class Nonintegrable(ConeSobolevError, ValueError):
    pass


class NotApplicable(ConeSobolevError, ValueError):
    """The requested operation does not apply to this exponent regime."""


class AssumptionViolation(ConeSobolevError, ValueError):
    pass


class BranchMismatch(ConeSobolevError, ValueError):
    pass


class QuadratureFailure(ConeSobolevError):
    pass


class GammaDependence(ConeSobolevError):
    pass


class NotEqualWeights(ConeSobolevError, ValueError):
    pass


class ZeroGradient(ConeSobolevError, ZeroDivisionError):
    pass


class BumpExitsCone(ConeSobolevError, ValueError):
    pass


class ResolutionInsufficient(ConeSobolevError, ValueError):
    pass


class SizeExceeded(ConeSobolevError, ValueError):
    pass


class BinningMismatch(ConeSobolevError, ValueError):
    pass


class MapLeavesCone(ConeSobolevError, ValueError):
    pass


class NormalizationFailure(ConeSobolevError):
    pass


class ConfigError(ConeSobolevError, ValueError):
    """Problem in a scenario configuration file.

    ``kind`` is one of ``parse_error``, ``unknown_key``, ``invalid_family``
    or ``invalid_value``; ``lineno`` is 1-based when known.
    """

    def __init__(self, kind, message, lineno=None):
        self.kind = kind
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{kind}: {where}{message}")


class SupportTouchesBoundary(UserWarning):
    """A grid function is not negligible on the outer ring of its box."""
