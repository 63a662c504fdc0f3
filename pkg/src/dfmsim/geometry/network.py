"""Network-level intersection search with tolerance snapping.

Pairwise tests come from :mod:`.intersect`; this module adds the bookkeeping:
snapping nearby points to a canonical representative, merging coincident
point intersections across pairs, and locating the 0D points where
intersection segments cross each other inside a common fracture plane.
"""

from __future__ import annotations

import numpy as np

from .intersect import polygon_intersect_3d, segment_intersect_2d, _plane_basis, _project
from .primitives import FractureNetwork, Intersection, IntersectionResult, Segment2


class PointRegistry:
    """Snap points within ``tol`` to the first-seen canonical representative."""

    def __init__(self, tol, dim):
        self.tol = tol
        self.points = np.zeros((0, dim))

    def register(self, p):
        p = np.asarray(p, dtype=float)
        if len(self.points):
            d = np.linalg.norm(self.points - p, axis=1)
            k = int(np.argmin(d))
            if d[k] <= self.tol:
                return k, self.points[k].copy()
        self.points = np.vstack([self.points, p])
        return len(self.points) - 1, p.copy()


def _snap_result(res, registry):
    if res.is_empty:
        return res
    pts = [registry.register(p)[1] for p in res.points]
    if res.is_point:
        return IntersectionResult.point(pts[0])
    if np.linalg.norm(pts[0] - pts[1]) <= registry.tol:
        # Snapping collapsed the segment; degrade to a point.
        return IntersectionResult.point(pts[0])
    return IntersectionResult.segment(pts[0], pts[1])


def find_intersections(network: FractureNetwork) -> FractureNetwork:
    """Populate ``network.intersections`` with all pairwise intersections.

    Coincident point intersections are merged with the union of their parent
    ids. In 3D, intersection segments lying in a common fracture plane are
    checked against each other; their crossing points are recorded as extra
    point intersections and noted as split locations on the segment records.
    Deterministic: fractures are processed in ascending id order.
    """
    tol = network.tol
    fractures = sorted(network.fractures, key=lambda f: f.id)
    registry = PointRegistry(tol, network.dim)

    segments: list[Intersection] = []
    # point key (registry index) -> set of parent ids
    point_parents: dict[int, set] = {}
    point_coords: dict[int, np.ndarray] = {}

    def add_point(p, parents):
        k, canon = registry.register(p)
        point_parents.setdefault(k, set()).update(parents)
        point_coords[k] = canon

    for i in range(len(fractures)):
        for j in range(i + 1, len(fractures)):
            fi, fj = fractures[i], fractures[j]
            if network.dim == 2:
                res = segment_intersect_2d(fi, fj, tol)
            else:
                res = polygon_intersect_3d(fi, fj, tol)
            res = _snap_result(res, registry)
            if res.is_empty:
                continue
            if res.is_point:
                add_point(res.points[0], (fi.id, fj.id))
            else:
                segments.append(Intersection((fi.id, fj.id), res))

    if network.dim == 3:
        _cross_segments_3d(network, segments, add_point, tol)

    intersections = list(segments)
    for k in sorted(point_parents):
        intersections.append(
            Intersection(point_parents[k], IntersectionResult.point(point_coords[k]))
        )
    network.intersections = intersections
    return network


def _cross_segments_3d(network, segments, add_point, tol):
    """Find where 1D intersection segments cross within a fracture plane."""
    for frac in sorted(network.fractures, key=lambda f: f.id):
        owned = [s for s in segments if frac.id in s.parents]
        if len(owned) < 2:
            continue
        e1, e2 = _plane_basis(frac.normal)
        for a in range(len(owned)):
            for b in range(a + 1, len(owned)):
                sa, sb = owned[a], owned[b]
                pa = _project(sa.result.points, frac.center, e1, e2)
                pb = _project(sb.result.points, frac.center, e1, e2)
                res = segment_intersect_2d(
                    Segment2(pa[0], pa[1]), Segment2(pb[0], pb[1]), tol
                )
                if res.is_empty:
                    continue
                parents = set(sa.parents) | set(sb.parents)
                # Crossing point, or endpoints of a collinear overlap: both
                # split the segment records at mutual locations.
                for p2 in res.points:
                    p3 = frac.center + p2[0] * e1 + p2[1] * e2
                    add_point(p3, parents)
                    for rec in (sa, sb):
                        if not any(
                            np.linalg.norm(p3 - q) <= tol for q in rec.split_points
                        ):
                            rec.split_points.append(p3)


def verify_on_parents(network: FractureNetwork, slack: float = 2.0) -> bool:
    """Check that every intersection lies on all its parents within tolerance."""
    tol = network.tol * slack
    for isect in network.intersections:
        for pid in isect.parents:
            f = network.fracture_by_id(pid)
            for p in isect.result.points:
                if network.dim == 2:
                    d = _point_segment_distance(p, f.p0, f.p1)
                else:
                    d = _point_polygon_distance(p, f)
                if d > tol:
                    return False
    return True


def _point_segment_distance(p, a, b):
    ab = b - a
    t = np.clip((p - a) @ ab / (ab @ ab), 0.0, 1.0)
    return float(np.linalg.norm(a + t * ab - p))


def _point_polygon_distance(p, f):
    h = abs((p - f.center) @ f.normal)
    e1, e2 = _plane_basis(f.normal)
    p2 = _project(p, f.center, e1, e2)[0]
    poly = _project(f.vertices, f.center, e1, e2)
    n = len(poly)
    x, y = poly[:, 0], poly[:, 1]
    ccw = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) >= 0
    inside = True
    d_edge = np.inf
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        edge = b - a
        m = np.array([-edge[1], edge[0]])
        if not ccw:
            m = -m
        if (p2 - a) @ m < 0:
            inside = False
        d_edge = min(d_edge, _point_segment_distance(p2, a, b))
    lateral = 0.0 if inside else d_edge
    return float(np.hypot(h, lateral))
