"""Fracture primitives: 2D segments, 3D convex polygons, and networks.

All coordinates are double precision, units of meters. Objects are immutable
after construction and validate their own invariants; degenerate inputs are
rejected here so downstream operations can assume well-formed geometry.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateSegment, NonConvexPolygon, NonPlanarPolygon

# Construction-time floor used when no network tolerance is known yet.
_ABS_TINY = 1e-14


class IntersectionResult:
    """Outcome of a pairwise intersection test: empty, a point, or a segment.

    ``points`` has shape (0, d), (1, d) or (2, d) with d the ambient dimension.
    """

    __slots__ = ("kind", "points")

    EMPTY = "empty"
    POINT = "point"
    SEGMENT = "segment"

    def __init__(self, kind, points):
        self.kind = kind
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        if kind == self.EMPTY:
            self.points = self.points.reshape(0, self.points.shape[-1])

    @classmethod
    def empty(cls, dim=2):
        return cls(cls.EMPTY, np.zeros((0, dim)))

    @classmethod
    def point(cls, p):
        return cls(cls.POINT, np.asarray(p, dtype=float).reshape(1, -1))

    @classmethod
    def segment(cls, p0, p1):
        return cls(cls.SEGMENT, np.vstack([p0, p1]).astype(float))

    @property
    def is_empty(self):
        return self.kind == self.EMPTY

    @property
    def is_point(self):
        return self.kind == self.POINT

    @property
    def is_segment(self):
        return self.kind == self.SEGMENT

    def __repr__(self):
        if self.is_empty:
            return "IntersectionResult(empty)"
        pts = ", ".join(str(p) for p in self.points)
        return f"IntersectionResult({self.kind}: {pts})"


class Segment2:
    """Straight fracture trace in a 2D domain.

    Endpoints must be distinct; ``tol`` is the minimum allowed separation.
    """

    __slots__ = ("p0", "p1", "id")

    def __init__(self, p0, p1, frac_id=-1, tol=_ABS_TINY):
        self.p0 = np.asarray(p0, dtype=float).reshape(2)
        self.p1 = np.asarray(p1, dtype=float).reshape(2)
        self.id = int(frac_id)
        if np.linalg.norm(self.p1 - self.p0) <= max(tol, _ABS_TINY):
            raise DegenerateSegment(
                f"segment {self.id}: endpoints {self.p0} and {self.p1} coincide"
            )

    @property
    def length(self):
        return float(np.linalg.norm(self.p1 - self.p0))

    @property
    def points(self):
        return np.vstack([self.p0, self.p1])

    def __repr__(self):
        return f"Segment2(id={self.id}, {self.p0} -> {self.p1})"


class Fracture3:
    """Planar convex polygon embedded in 3D, the basic fracture object.

    Vertices are kept in input order but validated to be coplanar (within
    ``tol``), convex, and of area greater than ``tol**2``.
    """

    __slots__ = ("vertices", "id", "normal", "center")

    def __init__(self, vertices, frac_id=-1, tol=1e-10):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 3:
            raise NonConvexPolygon("polygon needs at least 3 vertices of dim 3")
        self.vertices = v
        self.id = int(frac_id)
        self.normal, self.center = self._fit_plane(tol)
        self._check_convex(tol)

    def _fit_plane(self, tol):
        v = self.vertices
        center = v.mean(axis=0)
        # Newell's method: robust normal for (nearly) planar polygons.
        n = np.zeros(3)
        for i in range(len(v)):
            a = v[i] - center
            b = v[(i + 1) % len(v)] - center
            n += np.cross(a, b)
        area2 = np.linalg.norm(n)
        if area2 <= 2.0 * tol * tol:
            raise NonConvexPolygon(f"fracture {self.id}: degenerate polygon (area ~ 0)")
        n = n / area2
        dist = np.abs((v - center) @ n)
        if dist.max() > max(tol, _ABS_TINY * np.abs(v).max()):
            raise NonPlanarPolygon(
                f"fracture {self.id}: vertices deviate {dist.max():.3e} from plane"
            )
        return n, center

    def _check_convex(self, tol):
        v = self.vertices
        nv = len(v)
        diam = np.linalg.norm(v.max(axis=0) - v.min(axis=0))
        for i in range(nv):
            e0 = v[(i + 1) % nv] - v[i]
            e1 = v[(i + 2) % nv] - v[(i + 1) % nv]
            turn = np.cross(e0, e1) @ self.normal
            if turn < -tol * diam:
                raise NonConvexPolygon(f"fracture {self.id}: reflex corner at vertex {i}")

    @property
    def area(self):
        v = self.vertices - self.center
        n = np.zeros(3)
        for i in range(len(v)):
            n += np.cross(v[i], v[(i + 1) % len(v)])
        return 0.5 * float(np.linalg.norm(n))

    def __repr__(self):
        return f"Fracture3(id={self.id}, {len(self.vertices)} vertices)"


class Intersection:
    """Lower-dimensional intersection between two or more fractures.

    ``parents`` is the sorted tuple of fracture ids, ``result`` the point or
    segment geometry. Segment records may carry ``split_points``: locations
    where other intersection lines cross this one.
    """

    __slots__ = ("parents", "result", "split_points")

    def __init__(self, parents, result, split_points=None):
        self.parents = tuple(sorted(set(int(p) for p in parents)))
        self.result = result
        self.split_points = [] if split_points is None else list(split_points)

    @property
    def is_point(self):
        return self.result.is_point

    @property
    def is_segment(self):
        return self.result.is_segment

    def __repr__(self):
        return f"Intersection(parents={self.parents}, {self.result.kind})"


class FractureNetwork:
    """A collection of fractures of one kind plus computed intersections.

    ``tol`` defaults to 1e-8 times the bounding-box diagonal of the network,
    so behavior is independent of the physical unit of the coordinates.
    """

    def __init__(self, fractures, tol=None):
        fractures = list(fractures)
        kinds = {type(f) for f in fractures}
        if kinds - {Segment2, Fracture3}:
            raise TypeError("fractures must be Segment2 or Fracture3 instances")
        if len(kinds) > 1:
            raise TypeError("cannot mix 2D segments and 3D polygons in one network")
        self.fractures = fractures
        self.dim = 3 if kinds == {Fracture3} else 2
        # Relabel unlabeled fractures by position so every id is usable.
        for i, f in enumerate(self.fractures):
            if f.id < 0:
                f_new = (
                    Segment2(f.p0, f.p1, i)
                    if isinstance(f, Segment2)
                    else Fracture3(f.vertices, i)
                )
                self.fractures[i] = f_new
        ids = [f.id for f in self.fractures]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate fracture ids: {sorted(ids)}")
        self.tol = float(tol) if tol is not None else 1e-8 * self.bounding_box_diagonal()
        self.intersections: list[Intersection] = []

    def bounding_box_diagonal(self):
        if not self.fractures:
            return 1.0
        pts = np.vstack(
            [f.points if isinstance(f, Segment2) else f.vertices for f in self.fractures]
        )
        diag = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
        return diag if diag > 0 else 1.0

    def fracture_by_id(self, frac_id):
        for f in self.fractures:
            if f.id == frac_id:
                return f
        raise KeyError(f"no fracture with id {frac_id}")

    def __len__(self):
        return len(self.fractures)

    def __repr__(self):
        return (
            f"FractureNetwork(dim={self.dim}, {len(self.fractures)} fractures, "
            f"{len(self.intersections)} intersections, tol={self.tol:.3e})"
        )
