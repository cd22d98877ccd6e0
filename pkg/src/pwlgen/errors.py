"""Exception types raised across the package.

Each class carries a short ``code`` used by the CLI when reporting failures.
"""

from __future__ import annotations


class PWLError(ValueError):
    code = "ERROR"


class EmptyPolytope(PWLError):
    code = "EMPTY"


class UnboundedPolytope(PWLError):
    code = "UNBOUNDED"


class DimensionMismatch(PWLError):
    code = "DIMENSION_MISMATCH"


class EmptyDomain(PWLError):
    code = "EMPTY_DOMAIN"


class DegeneratePoint(PWLError):
    code = "DEGENERATE_POINT"


class OutOfRange(PWLError):
    code = "R_OUT_OF_RANGE"


class TooLarge(PWLError):
    code = "D_TOO_LARGE"


class TooSmall(PWLError):
    code = "D_TOO_SMALL"


class ScaleLimit(PWLError):
    code = "SCALE_LIMIT"


class GroundSetMismatch(PWLError):
    code = "GROUND_SET_MISMATCH"


class DegenerateDirections(PWLError):
    code = "DEGENERATE_DIRECTIONS"


class Unsupported(PWLError):
    code = "UNSUPPORTED"


class InvalidTriangleCover(PWLError):
    code = "INVALID_TRIANGLE_COVER"


class UnknownMethod(PWLError):
    code = "UNKNOWN_METHOD"


class DomainMismatch(PWLError):
    code = "DOMAIN_MISMATCH"


class NameTooLong(PWLError):
    code = "NAME_TOO_LONG"


class EmptyModel(PWLError):
    code = "EMPTY_MODEL"
