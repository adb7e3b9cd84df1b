"""Exception hierarchy.

Every error raised by the library derives from :class:`GeometryError`, so
callers that only care about "construction failed" can catch one class.
"""

from __future__ import annotations


class GeometryError(Exception):
    """Base class for all construction and verification failures."""


# projective primitives
class CoincidentPoints(GeometryError):
    pass


class CoincidentLines(GeometryError):
    pass


class NotCollinear(GeometryError):
    pass


class DegenerateCrossRatio(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class PointAtVertex(DegenerateInput):
    pass


class PointOnWrongEdge(GeometryError):
    pass


class CenterOnLine(GeometryError):
    pass


class NotAnEndomorphism(GeometryError):
    pass


class ChartFailure(GeometryError):
    pass


# conics
class DegenerateConic(GeometryError):
    pass


class DegenerateBase(GeometryError):
    pass


class NonGenericLines(GeometryError):
    pass


class NotTangent(GeometryError):
    pass


class ParameterOutOfRange(GeometryError):
    pass


class PointInsideConic(GeometryError):
    pass


# quadrilaterals and inscribed conics
class NonGenericQuadrilateral(GeometryError):
    pass


class PointNotOnEdge(GeometryError):
    pass


class DegenerateFamilyMember(GeometryError):
    pass


class ZeroLambda(GeometryError):
    pass


class ZeroGamma(GeometryError):
    pass


# nets and loops
class InvalidLoop(GeometryError):
    pass


class ClosureFailure(GeometryError):
    """Touching conics could not be closed around an interior vertex.

    ``vertex`` is the first vertex where propagation failed, ``residual`` the
    2x2 monodromy matrix of the four cells around it, and ``vertices`` every
    interior vertex whose local monodromy is not the identity.
    """

    def __init__(self, vertex, residual, vertices=()):
        self.vertex = vertex
        self.residual = residual
        self.vertices = tuple(vertices)
        super().__init__(f"touching conics do not close around vertex {vertex}")


# grids
class NonGenericChain(GeometryError):
    pass


class ChainPointOffConic(GeometryError):
    pass


class NoCommonConic(GeometryError):
    def __init__(self, message, detail=None):
        self.detail = detail
        super().__init__(message if detail is None else f"{message} ({detail})")


class InconsistentStrip(GeometryError):
    pass


# billiards
class NotTangentChord(GeometryError):
    pass


class TangentDegeneracy(GeometryError):
    pass


class NoIncircle(GeometryError):
    pass


# scenes and rendering
class ParseError(GeometryError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message if location is None else f"{location}: {message}")


class SceneReferenceError(GeometryError):
    def __init__(self, name, location=None):
        self.name = name
        self.location = location
        where = f" (in {location})" if location else ""
        super().__init__(f"dangling reference {name!r}{where}")


class EmptyViewport(GeometryError):
    pass
