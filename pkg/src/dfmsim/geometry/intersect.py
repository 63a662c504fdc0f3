"""Pairwise intersection tests for segments (2D) and convex polygons (3D).

Tolerances are absolute distances in meters: two objects intersect when they
come within ``tol`` of each other, and endpoint/boundary touching within
``tol`` counts. Classification is distance-driven rather than predicate-driven
so near-parallel configurations degrade gracefully.
"""

from __future__ import annotations

import numpy as np

from ..errors import CoplanarOverlap
from .primitives import Fracture3, IntersectionResult, Segment2


def _closest_params_segments(p, r, q, s):
    """Clamped closest-point parameters (t, u) between segments p+tr, q+us."""
    a = r @ r
    e = s @ s
    b = r @ s
    c = r @ (p - q)
    f = s @ (p - q)
    denom = a * e - b * b
    if denom > 1e-14 * a * e:
        t = np.clip((b * f - c * e) / denom, 0.0, 1.0)
    else:
        t = 0.0
    u = (b * t + f) / e
    if u < 0.0 or u > 1.0:
        u = np.clip(u, 0.0, 1.0)
        t = np.clip((b * u - c) / a, 0.0, 1.0)
    return t, u


def segment_intersect_2d(a: Segment2, b: Segment2, tol: float) -> IntersectionResult:
    """Intersect two 2D segments within an absolute distance tolerance.

    Collinear overlap longer than ``tol`` yields a segment; anything else
    that comes within ``tol`` (crossing, T- or endpoint touch) yields a point.
    """
    p, r = a.p0, a.p1 - a.p0
    q, s = b.p0, b.p1 - b.p0
    lr = np.linalg.norm(r)
    u_hat = r / lr

    # Perpendicular distances of b's endpoints from the supporting line of a.
    perp = np.array([-u_hat[1], u_hat[0]])
    e0 = (b.p0 - p) @ perp
    e1 = (b.p1 - p) @ perp

    if abs(e0) <= tol and abs(e1) <= tol:
        # Nearly collinear: compare parameter intervals along a's direction.
        t0 = (b.p0 - p) @ u_hat
        t1 = (b.p1 - p) @ u_hat
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        lo = max(lo, 0.0)
        hi = min(hi, lr)
        if hi - lo > tol:
            return IntersectionResult.segment(p + lo * u_hat, p + hi * u_hat)
        if hi - lo >= -tol:
            mid = 0.5 * (lo + hi)
            return IntersectionResult.point(p + np.clip(mid, 0.0, lr) * u_hat)
        return IntersectionResult.empty(2)

    t, u = _closest_params_segments(p, r, q, s)
    pa = p + t * r
    pb = q + u * s
    if np.linalg.norm(pa - pb) <= tol:
        return IntersectionResult.point(0.5 * (pa + pb))
    return IntersectionResult.empty(2)


def _plane_basis(normal):
    """Two orthonormal in-plane directions for a unit normal."""
    k = np.argmin(np.abs(normal))
    e1 = np.zeros(3)
    e1[k] = 1.0
    e1 = e1 - (e1 @ normal) * normal
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return e1, e2


def _project(points, origin, e1, e2):
    d = np.atleast_2d(points) - origin
    return np.column_stack([d @ e1, d @ e2])


def _polygon_ccw_2d(poly):
    """Return the polygon with positive (counter-clockwise) signed area."""
    x, y = poly[:, 0], poly[:, 1]
    area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    return poly if area2 >= 0 else poly[::-1]


def _clip_line_convex_2d(poly, x0, d, tol):
    """Parameter interval of the line x0 + t*d inside a convex CCW polygon.

    The polygon is inflated by ``tol``. Returns (lo, hi) or None when the
    line misses the polygon entirely.
    """
    lo, hi = -np.inf, np.inf
    n = len(poly)
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        edge = b - a
        elen = np.linalg.norm(edge)
        if elen == 0.0:
            continue
        # Inward normal for a CCW polygon.
        m = np.array([-edge[1], edge[0]]) / elen
        num = (a - x0) @ m - tol
        den = d @ m
        if abs(den) < 1e-13:
            if (x0 - a) @ m < -tol:
                return None
            continue
        t = num / den
        if den > 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
        if lo > hi:
            return None
    return lo, hi


def _clip_polygon_halfplane(poly, a, m):
    """Sutherland-Hodgman clip of a polygon by the half plane (x-a).m >= 0."""
    out = []
    n = len(poly)
    for i in range(n):
        p = poly[i]
        q = poly[(i + 1) % n]
        dp = (p - a) @ m
        dq = (q - a) @ m
        if dp >= 0:
            out.append(p)
            if dq < 0:
                out.append(p + (q - p) * dp / (dp - dq))
        elif dq >= 0:
            out.append(p + (q - p) * dp / (dp - dq))
    return np.array(out) if out else np.zeros((0, 2))


def _polygon_area_2d(poly):
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _coplanar_intersection(pa, pb, tol, label):
    """Intersection of two coplanar convex polygons given in shared 2D coords."""
    pa = _polygon_ccw_2d(pa)
    pb = _polygon_ccw_2d(pb)
    clipped = pb
    n = len(pa)
    for i in range(n):
        a = pa[i]
        edge = pa[(i + 1) % n] - a
        m = np.array([-edge[1], edge[0]])
        m /= np.linalg.norm(m)
        clipped = _clip_polygon_halfplane(clipped, a, m)
        if len(clipped) == 0:
            break
    if _polygon_area_2d(clipped) > tol * tol:
        raise CoplanarOverlap(f"{label}: coplanar polygons share a 2D region")
    # Degenerate contact: collect touch points from edge pairs and vertices.
    contacts = []
    for i in range(len(pa)):
        sa = Segment2(pa[i], pa[(i + 1) % len(pa)])
        for j in range(len(pb)):
            sb = Segment2(pb[j], pb[(j + 1) % len(pb)])
            res = segment_intersect_2d(sa, sb, tol)
            contacts.extend(res.points)
    if not contacts:
        return IntersectionResult.empty(2)
    contacts = np.array(contacts)
    # Longest pairwise separation decides point vs segment.
    d2 = ((contacts[:, None, :] - contacts[None, :, :]) ** 2).sum(axis=2)
    i, j = np.unravel_index(np.argmax(d2), d2.shape)
    if np.sqrt(d2[i, j]) > tol:
        return IntersectionResult.segment(contacts[i], contacts[j])
    return IntersectionResult.point(contacts.mean(axis=0))


def polygon_intersect_3d(a: Fracture3, b: Fracture3, tol: float) -> IntersectionResult:
    """Intersect two convex planar polygons in 3D.

    Returns the shared point or segment (T- and L-configurations included).
    Coplanar polygons sharing a region of positive area raise
    :class:`CoplanarOverlap`.
    """
    n1, c1 = a.normal, a.center
    n2, c2 = b.normal, b.center
    cr = np.cross(n1, n2)
    sin_angle = np.linalg.norm(cr)
    diam = max(
        np.linalg.norm(a.vertices.max(0) - a.vertices.min(0)),
        np.linalg.norm(b.vertices.max(0) - b.vertices.min(0)),
    )

    if sin_angle * diam <= 2.0 * tol:
        # Parallel planes within tolerance over the polygon extent.
        if abs((c2 - c1) @ n1) > tol:
            return IntersectionResult.empty(3)
        e1, e2 = _plane_basis(n1)
        pa = _project(a.vertices, c1, e1, e2)
        pb = _project(b.vertices, c1, e1, e2)
        res = _coplanar_intersection(pa, pb, tol, f"fractures ({a.id}, {b.id})")
        if res.is_empty:
            return IntersectionResult.empty(3)
        pts3 = c1 + res.points[:, :1] * e1 + res.points[:, 1:] * e2
        if res.is_point:
            return IntersectionResult.point(pts3[0])
        return IntersectionResult.segment(pts3[0], pts3[1])

    # Line of intersection of the two supporting planes. Anchor the solve at
    # the centroid midpoint so the line point stays near the polygons.
    d = cr / sin_angle
    origin = 0.5 * (c1 + c2)
    A = np.vstack([n1, n2])
    rhs = np.array([n1 @ (c1 - origin), n2 @ (c2 - origin)])
    y, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    x0 = origin + y

    intervals = []
    for poly in (a, b):
        e1, e2 = _plane_basis(poly.normal)
        p2 = _project(poly.vertices, poly.center, e1, e2)
        x2 = _project(x0, poly.center, e1, e2)[0]
        d2 = np.array([d @ e1, d @ e2])
        nd = np.linalg.norm(d2)
        if nd < 1e-12:
            return IntersectionResult.empty(3)
        ccw = _polygon_ccw_2d(p2)
        # Exact clip keeps endpoints on the polygon boundary; the inflated
        # clip only serves to catch lines grazing the boundary within tol.
        iv = _clip_line_convex_2d(ccw, x2, d2 / nd, 0.0)
        if iv is None:
            iv = _clip_line_convex_2d(ccw, x2, d2 / nd, tol)
        if iv is None:
            return IntersectionResult.empty(3)
        intervals.append(iv)

    lo = max(intervals[0][0], intervals[1][0])
    hi = min(intervals[0][1], intervals[1][1])
    if hi - lo > tol:
        return IntersectionResult.segment(x0 + lo * d, x0 + hi * d)
    if hi - lo >= -tol:
        mid = 0.5 * (lo + hi)
        return IntersectionResult.point(x0 + mid * d)
    return IntersectionResult.empty(3)
