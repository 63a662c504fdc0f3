"""Exact rational reference results for the floating-point geometry kernels.

Everything here runs on fractions.Fraction coordinates, so expected values
are produced by arithmetic that shares no code (and no rounding) with the
implementation under test. Test inputs are built from dyadic rationals
(denominator a power of two); those convert to float and back without any
rounding, so both routes see identical data.

Each oracle returns (kind, points, margin_sq, sin_sq):
  kind       "empty" | "point" | "segment" | "degenerate"
  points     tuple of Fraction coordinate tuples
  margin_sq  squared-distance lower bound on how far the configuration sits
             from one of a different kind; random tests discard small margins
             so exact and float classifications must agree
  sin_sq     squared sine of the crossing angle (stability of the location)
"""

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def fr(x):
    return Fraction(x)


def v(p):
    return tuple(Fraction(c) for c in p)


def v_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def v_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def v_scale(a, k):
    return tuple(x * k for x in a)


def v_dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def cross3(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def point_segment_d2(x, a, b):
    """Exact squared distance from point x to segment (a, b)."""
    ab = v_sub(b, a)
    den = v_dot(ab, ab)
    t = Fraction(v_dot(v_sub(x, a), ab), den)
    t = min(max(t, ZERO), ONE)
    d = v_sub(x, v_add(a, v_scale(ab, t)))
    return v_dot(d, d)


def seg_intersect_2d_exact(p0, p1, q0, q1):
    """Exact intersection of segments (p0,p1) and (q0,q1) at zero tolerance."""
    p0, p1, q0, q1 = v(p0), v(p1), v(q0), v(q1)
    r = v_sub(p1, p0)
    s = v_sub(q1, q0)
    qp = v_sub(q0, p0)
    rr = v_dot(r, r)
    ss = v_dot(s, s)
    rxs = cross2(r, s)

    if rxs == 0:
        c = cross2(qp, r)
        if c != 0:
            # Parallel distinct lines: perpendicular offset bounds the gap.
            return "empty", (), Fraction(c * c, rr), ZERO
        # Collinear: overlap of arc-length parameter intervals on segment a.
        t0 = Fraction(v_dot(qp, r), rr)
        t1 = Fraction(v_dot(v_sub(q1, p0), r), rr)
        lo = max(min(t0, t1), ZERO)
        hi = min(max(t0, t1), ONE)
        w2 = (hi - lo) * (hi - lo) * rr
        if hi > lo:
            pts = (v_add(p0, v_scale(r, lo)), v_add(p0, v_scale(r, hi)))
            return "segment", pts, w2, ZERO
        if hi == lo:
            return "point", (v_add(p0, v_scale(r, lo)),), ZERO, ZERO
        return "empty", (), w2, ZERO

    sin2 = Fraction(rxs * rxs, rr * ss)
    t = Fraction(cross2(qp, s), rxs)
    u = Fraction(cross2(qp, r), rxs)
    if ZERO <= t <= ONE and ZERO <= u <= ONE:
        x = v_add(p0, v_scale(r, t))
        mt = min(t, ONE - t)
        mu = min(u, ONE - u)
        margin = min(mt * mt * rr, mu * mu * ss)
        return "point", (x,), margin, sin2
    d2 = min(
        point_segment_d2(p0, q0, q1),
        point_segment_d2(p1, q0, q1),
        point_segment_d2(q0, p0, p1),
        point_segment_d2(q1, p0, p1),
    )
    return "empty", (), d2, sin2


def newell_normal(verts):
    n = [ZERO, ZERO, ZERO]
    m = len(verts)
    for i in range(m):
        a = verts[i]
        b = verts[(i + 1) % m]
        n[0] += (a[1] - b[1]) * (a[2] + b[2])
        n[1] += (a[2] - b[2]) * (a[0] + b[0])
        n[2] += (a[0] - b[0]) * (a[1] + b[1])
    return tuple(n)


def _interval_on_line(verts, normal, x0, d):
    """Exact parameter interval of the line x0 + t*d inside a convex polygon.

    The line must lie in the polygon plane (d is the plane-plane direction).
    Returns (lo, hi, gap2): lo > hi encodes an empty interval; gap2 is the
    squared perpendicular miss distance when a parallel edge rules the line
    out entirely, else None.
    """
    m = len(verts)
    cen = v_scale(tuple(sum(c) for c in zip(*verts)), Fraction(1, m))
    lo, hi = None, None
    for i in range(m):
        a = verts[i]
        b = verts[(i + 1) % m]
        edge = v_sub(b, a)
        nrm = cross3(normal, edge)
        if v_dot(nrm, v_sub(cen, a)) < 0:
            nrm = v_scale(nrm, -ONE)
        num = v_dot(nrm, v_sub(x0, a))
        den = v_dot(nrm, d)
        if den == 0:
            if num < 0:
                return ZERO, -ONE, Fraction(num * num, v_dot(nrm, nrm))
            continue
        t = Fraction(-num, den)
        if den > 0:
            lo = t if lo is None else max(lo, t)
        else:
            hi = t if hi is None else min(hi, t)
    return lo, hi, None


def poly_intersect_3d_exact(va, vb):
    """Exact intersection of two convex planar polygons in 3D (tol = 0)."""
    va = [v(p) for p in va]
    vb = [v(p) for p in vb]
    n1 = newell_normal(va)
    n2 = newell_normal(vb)
    cr = cross3(n1, n2)
    cc = v_dot(cr, cr)
    if cc == 0:
        return "degenerate", (), ZERO, ZERO
    sin2 = Fraction(cc, v_dot(n1, n1) * v_dot(n2, n2))

    # Exact point on both planes: fix the axis with the largest |cr| entry.
    k = max(range(3), key=lambda i: abs(cr[i]))
    i, j = [ax for ax in range(3) if ax != k]
    d1 = v_dot(n1, va[0])
    d2 = v_dot(n2, vb[0])
    det = n1[i] * n2[j] - n1[j] * n2[i]
    x0 = [ZERO, ZERO, ZERO]
    x0[i] = Fraction(d1 * n2[j] - d2 * n1[j], det)
    x0[j] = Fraction(d2 * n1[i] - d1 * n2[i], det)
    x0 = tuple(x0)

    intervals = []
    for verts, nrm in ((va, n1), (vb, n2)):
        lo, hi, gap2 = _interval_on_line(verts, nrm, x0, cr)
        if gap2 is not None:
            return "empty", (), gap2, sin2
        intervals.append((lo, hi))

    lo = max(intervals[0][0], intervals[1][0])
    hi = min(intervals[0][1], intervals[1][1])
    w = hi - lo
    margin2 = w * w * cc
    if w > 0:
        pts = (v_add(x0, v_scale(cr, lo)), v_add(x0, v_scale(cr, hi)))
        return "segment", pts, margin2, sin2
    if w == 0:
        return "point", (v_add(x0, v_scale(cr, lo)),), ZERO, sin2
    return "empty", (), margin2, sin2


def as_float(points):
    return [[float(c) for c in p] for p in points]
