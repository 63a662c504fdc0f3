"""Exception hierarchy shared across the package.

The command line front end maps the three error categories to exit codes:
configuration problems (2), geometry problems (3), solver failures (4).
"""


class DfmsimError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(DfmsimError):
    """Invalid or incomplete scenario configuration."""


class ParseError(ConfigError):
    """Malformed input file; message carries file name and line number."""


class MissingSection(ConfigError):
    """Scenario configuration lacks a section required by the subcommand."""


class MissingParameters(ConfigError):
    """A grid or interface has no parameters attached before assembly."""


class GeometryError(DfmsimError):
    """Invalid or unsupported geometric configuration."""


class CoplanarOverlap(GeometryError):
    """Two coplanar polygons share a two-dimensional region (unsupported)."""


class GeometryTooFine(GeometryError):
    """Two distinct geometric features end up closer than the tolerance."""


class DegenerateSegment(GeometryError):
    """Segment endpoints coincide within tolerance."""


class NonPlanarPolygon(GeometryError):
    """Polygon vertices are not coplanar within tolerance."""


class NonConvexPolygon(GeometryError):
    """Polygon is not convex."""


class DegenerateCell(GeometryError):
    """Computed cell volume is zero or negative."""


class NoFractures(GeometryError):
    """Operation requires at least one fracture grid."""


class SolverError(DfmsimError):
    """Linear or nonlinear solve failed."""


class SingularMatrix(SolverError):
    """Direct factorization hit a zero pivot."""


class SingularSystem(SolverError):
    """Assembled system is singular (e.g. pure-Neumann flow problem)."""


class SingularLocalSystem(SolverError):
    """Degenerate interaction region in a multi-point discretization."""


class SolverDivergence(SolverError):
    """Iterative process failed to reach the requested tolerance."""


class MaxIterations(SolverDivergence):
    """Iteration cap reached before convergence."""


class Breakdown(SolverError):
    """Krylov recurrence broke down (rho ~ 0)."""


class CflViolation(SolverError):
    """Explicit time step exceeds the stability limit."""


class InnerLoopNotConverged(SolverError):
    """Slip equilibration loop hit its iteration cap."""
