"""Constrained Delaunay triangulation of a rectangle with embedded segments.

Incremental insertion with Lawson flips, constraint recovery by edge flips,
and Ruppert-style quality refinement: encroached constraint subsegments are
split at their midpoints, skinny or oversized triangles get circumcenter
insertions, and circumcenters that would cross a constraint split that
constraint instead. Sizes come from a SizeField; refinement respects the
h_min floor so termination is guaranteed by a packing argument.

Triangles are stored as CCW index triples with a parallel neighbor table
(neighbor[i] sits across the edge opposite vertex i). Dead triangles are
tombstoned. All queues are FIFO and all scans index-ordered, so identical
input produces an identical mesh.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .._accel import maybe_njit
from ..errors import GeometryError, GeometryTooFine
from .grid import Grid, Rectangle, compute_geometry
from .sizing import MeshSizeSpec, SizeField

MIN_ANGLE_DEG = 20.0


@maybe_njit(cache=True)
def _orient(ax, ay, bx, by, cx, cy):
    """Twice the signed area of (a, b, c); >0 for CCW."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


@maybe_njit(cache=True)
def _orient_eps(ax, ay, bx, by, cx, cy):
    """Magnitude scale for the orientation determinant's rounding error."""
    return 1e-12 * (
        abs((bx - ax) * (cy - ay)) + abs((by - ay) * (cx - ax)) + 1e-300
    )


@maybe_njit(cache=True)
def _incircle(ax, ay, bx, by, cx, cy, dx, dy):
    """>0 iff d is strictly inside the circumcircle of CCW triangle (a,b,c)."""
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    ad = adx * adx + ady * ady
    bd = bdx * bdx + bdy * bdy
    cd = cdx * cdx + cdy * cdy
    det = (
        adx * (bdy * cd - bd * cdy)
        - ady * (bdx * cd - bd * cdx)
        + ad * (bdx * cdy - bdy * cdx)
    )
    mag = (
        abs(adx * bdy * cd) + abs(adx * bd * cdy)
        + abs(ady * bdx * cd) + abs(ady * bd * cdx)
        + abs(ad * bdx * cdy) + abs(ad * bdy * cdx) + 1e-300
    )
    if det > 1e-12 * mag:
        return 1
    return 0


@maybe_njit(cache=True)
def _circumcenter(ax, ay, bx, by, cx, cy):
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return ux, uy


def _key(a, b):
    return (a, b) if a < b else (b, a)


class _Triangulation:
    def __init__(self, rect: Rectangle, tol: float):
        self.rect = rect
        self.tol = tol
        c = rect.corners
        self.px = [float(x) for x in c[:, 0]]
        self.py = [float(y) for y in c[:, 1]]
        self.tri = [[0, 1, 2], [0, 2, 3]]
        self.nei = [[-1, 1, -1], [-1, -1, 0]]
        self.v_tri = [0, 0, 0, 1]
        # sorted node pair -> parent fracture id (-1 for the domain boundary)
        self.constrained = {(0, 1): -1, (1, 2): -1, (2, 3): -1, (0, 3): -1}
        self.dirty: list[int] = []
        self._hint = 0

    # -- basic queries -------------------------------------------------

    def n_points(self):
        return len(self.px)

    def alive(self):
        return [t for t in range(len(self.tri)) if self.tri[t] is not None]

    def _p(self, v):
        return self.px[v], self.py[v]

    def _set_tri(self, t, verts, neis):
        self.tri[t] = list(verts)
        self.nei[t] = list(neis)
        for v in verts:
            self.v_tri[v] = t
        self.dirty.append(t)

    def _new_tri(self, verts, neis):
        self.tri.append(list(verts))
        self.nei.append(list(neis))
        t = len(self.tri) - 1
        for v in verts:
            self.v_tri[v] = t
        self.dirty.append(t)
        return t

    def _link(self, t, s, a, b):
        """Point s's neighbor slot for edge (a, b) at t."""
        if s < 0:
            return
        verts = self.tri[s]
        for i in range(3):
            if verts[i] != a and verts[i] != b:
                self.nei[s][i] = t
                return
        raise GeometryError("broken neighbor link")

    def tris_around(self, v):
        """All alive triangles incident to vertex v."""
        out = []
        t = self.v_tri[v]
        if t < 0 or self.tri[t] is None or v not in self.tri[t]:
            # stale cache; fall back to a scan (rare)
            for t in range(len(self.tri)):
                if self.tri[t] is not None and v in self.tri[t]:
                    self.v_tri[v] = t
                    break
            else:
                return out
            t = self.v_tri[v]
        start = t
        # rotate CCW until boundary or full circle
        while True:
            out.append(t)
            lv = self.tri[t].index(v)
            nxt = self.nei[t][(lv + 2) % 3]  # across edge (v, next ccw vertex)
            if nxt == -1:
                break
            if nxt == start:
                return out
            t = nxt
        # open fan: rotate CW from start
        t = start
        while True:
            lv = self.tri[t].index(v)
            nxt = self.nei[t][(lv + 1) % 3]
            if nxt == -1:
                return out
            out.insert(0, nxt)
            t = nxt

    def find_edge(self, a, b):
        """(tri, local_of_opposite) containing edge (a, b), or None."""
        for t in self.tris_around(a):
            verts = self.tri[t]
            if b in verts:
                for i in range(3):
                    if verts[i] != a and verts[i] != b:
                        return t, i
        return None

    # -- point location ------------------------------------------------

    def locate(self, x, y, stop_at_constrained=False):
        """Walk to the triangle containing (x, y).

        Returns (t, blocked_key). When stop_at_constrained is set and the
        walk would cross a constrained edge, returns (-1, that edge key).
        """
        t = self._hint
        if t < 0 or t >= len(self.tri) or self.tri[t] is None:
            t = self.alive()[0]
        prev = -1
        for _ in range(4 * len(self.tri) + 16):
            verts = self.tri[t]
            worst, worst_i = 0.0, -1
            for i in range(3):
                a = verts[(i + 1) % 3]
                b = verts[(i + 2) % 3]
                o = _orient(*self._p(a), *self._p(b), x, y)
                eps = _orient_eps(*self._p(a), *self._p(b), x, y)
                if o < -eps and o < worst:
                    nxt = self.nei[t][i]
                    if nxt != prev or worst_i < 0:
                        worst, worst_i = o, i
            if worst_i < 0:
                self._hint = t
                return t, None
            i = worst_i
            a = verts[(i + 1) % 3]
            b = verts[(i + 2) % 3]
            nxt = self.nei[t][i]
            if stop_at_constrained and _key(a, b) in self.constrained:
                return -1, _key(a, b)
            if nxt < 0:
                self._hint = t
                return t, None  # clamp: treat as inside the boundary triangle
            prev, t = t, nxt
        raise GeometryError("point location did not terminate")

    # -- flips and legalization -----------------------------------------

    def flip(self, t, i):
        """Flip the edge opposite vertex i of t. Returns (t1, t2)."""
        a = self.tri[t][i]
        b = self.tri[t][(i + 1) % 3]
        c = self.tri[t][(i + 2) % 3]
        s = self.nei[t][i]
        sv = self.tri[s]
        d = next(v for v in sv if v != b and v != c)
        # external neighbors; in s edge (b,d) is opposite c, (d,c) opposite b
        n_ab = self.nei[t][(i + 2) % 3]
        n_ca = self.nei[t][(i + 1) % 3]
        n_bd = self.nei[s][sv.index(c)]
        n_dc = self.nei[s][sv.index(b)]
        self._set_tri(t, (a, b, d), (n_bd, s, n_ab))
        self._set_tri(s, (a, d, c), (n_dc, n_ca, t))
        self._link(t, n_bd, b, d)
        self._link(t, n_ab, a, b)
        self._link(s, n_dc, d, c)
        self._link(s, n_ca, c, a)
        return t, s

    def legalize(self, stack):
        """Lawson flips: stack holds (tri, local of newly inserted vertex)."""
        guard = 0
        while stack:
            guard += 1
            if guard > 50 * len(self.tri) + 1000:
                raise GeometryError("flip propagation did not terminate")
            t, lp = stack.pop()
            if self.tri[t] is None:
                continue
            p = self.tri[t][lp]
            b = self.tri[t][(lp + 1) % 3]
            c = self.tri[t][(lp + 2) % 3]
            s = self.nei[t][lp]
            if s < 0 or _key(b, c) in self.constrained:
                continue
            d = next(v for v in self.tri[s] if v != b and v != c)
            if _incircle(*self._p(p), *self._p(b), *self._p(c), *self._p(d)):
                t1, t2 = self.flip(t, lp)
                stack.append((t1, self.tri[t1].index(p)))
                stack.append((t2, self.tri[t2].index(p)))

    # -- insertion -------------------------------------------------------

    def _near_vertex(self, t, x, y, merge_tol):
        for v in self.tri[t]:
            if (self.px[v] - x) ** 2 + (self.py[v] - y) ** 2 <= merge_tol**2:
                return v
        return None

    def insert_point(self, x, y, merge_tol=None):
        """Insert (x, y); returns (vertex id, created_or_modified flag)."""
        if merge_tol is None:
            merge_tol = self.tol
        t, _ = self.locate(x, y)
        v = self._near_vertex(t, x, y, merge_tol)
        if v is not None:
            return v, False
        # on-edge test: distance to each edge of t
        verts = self.tri[t]
        best_i, best_d = -1, np.inf
        for i in range(3):
            a = verts[(i + 1) % 3]
            b = verts[(i + 2) % 3]
            ax, ay = self._p(a)
            bx, by = self._p(b)
            L2 = (bx - ax) ** 2 + (by - ay) ** 2
            u = ((x - ax) * (bx - ax) + (y - ay) * (by - ay)) / L2
            if -0.01 <= u <= 1.01:
                d = abs(_orient(ax, ay, bx, by, x, y)) / np.sqrt(L2)
                if d < best_d:
                    best_d, best_i = d, i
        self.px.append(x)
        self.py.append(y)
        self.v_tri.append(-1)
        p = len(self.px) - 1
        scale = np.sqrt(self.rect.width * self.rect.height)
        if best_i >= 0 and best_d <= 1e-11 * scale + 1e-14:
            stack = self._split_edge(t, best_i, p)
        else:
            stack = self._split_tri(t, p)
        self.legalize(stack)
        return p, True

    def _split_tri(self, t, p):
        a, b, c = self.tri[t]
        n_bc = self.nei[t][0]
        n_ca = self.nei[t][1]
        n_ab = self.nei[t][2]
        t1 = t
        self._set_tri(t1, (a, b, p), (0, 0, n_ab))
        t2 = self._new_tri((b, c, p), (0, 0, n_bc))
        t3 = self._new_tri((c, a, p), (0, 0, n_ca))
        self.nei[t1][0] = t2
        self.nei[t1][1] = t3
        self.nei[t2][0] = t3
        self.nei[t2][1] = t1
        self.nei[t3][0] = t1
        self.nei[t3][1] = t2
        self._link(t1, n_ab, a, b)
        self._link(t2, n_bc, b, c)
        self._link(t3, n_ca, c, a)
        return [(t1, 2), (t2, 2), (t3, 2)]

    def _split_edge(self, t, i, p):
        """Split the edge opposite vertex i of triangle t at vertex p."""
        a = self.tri[t][i]
        u = self.tri[t][(i + 1) % 3]
        v = self.tri[t][(i + 2) % 3]
        s = self.nei[t][i]
        n_au = self.nei[t][(i + 2) % 3]
        n_va = self.nei[t][(i + 1) % 3]
        key = _key(u, v)
        parent = self.constrained.pop(key, None)
        if parent is not None:
            self.constrained[_key(u, p)] = parent
            self.constrained[_key(p, v)] = parent

        t1 = t
        self._set_tri(t1, (a, u, p), (-1, 0, n_au))
        t2 = self._new_tri((a, p, v), (-1, n_va, t1))
        self.nei[t1][1] = t2
        self._link(t1, n_au, a, u)
        self._link(t2, n_va, v, a)
        stack = [(t1, 2), (t2, 1)]

        if s >= 0:
            sv = self.tri[s]
            b = next(w for w in sv if w != u and w != v)
            n_ub = self.nei[s][sv.index(v)]
            n_bv = self.nei[s][sv.index(u)]
            s1 = s
            self._set_tri(s1, (b, p, u), (t1, n_ub, 0))
            s2 = self._new_tri((b, v, p), (t2, s1, n_bv))
            self.nei[s1][2] = s2
            self.nei[t1][0] = s1
            self.nei[t2][0] = s2
            self._link(s1, n_ub, u, b)
            self._link(s2, n_bv, b, v)
            stack += [(s1, 1), (s2, 2)]
        return stack

    # -- constraint recovery ----------------------------------------------

    def recover_edge(self, a, b, parent):
        """Force edge (a, b) into the triangulation; split at collinear
        vertices encountered on the way. Marks all pieces constrained."""
        guard = 0
        while self.find_edge(a, b) is None:
            guard += 1
            if guard > len(self.tri) + 1000:
                raise GeometryError(f"constraint recovery stalled for ({a},{b})")
            hit = self._clear_corridor(a, b)
            if hit is not None:
                # collinear vertex on the way: constrain both halves
                self.recover_edge(a, hit, parent)
                a = hit
        self.constrained[_key(a, b)] = parent

    def _between(self, a, b, w):
        ax, ay = self._p(a)
        bx, by = self._p(b)
        wx, wy = self._p(w)
        d = (wx - ax) * (bx - ax) + (wy - ay) * (by - ay)
        L2 = (bx - ax) ** 2 + (by - ay) ** 2
        return 1e-12 < d / L2 < 1.0 - 1e-12

    def _corridor(self, a, b):
        """Edges crossing segment a-b, walking from a toward b.

        Returns ('vertex', w) when a vertex w sits on the open segment, else
        ('edges', [keys]).
        """
        ax, ay = self._p(a)
        bx, by = self._p(b)

        def side(w):
            o = _orient(ax, ay, bx, by, *self._p(w))
            e = _orient_eps(ax, ay, bx, by, *self._p(w))
            if o > e:
                return 1
            if o < -e:
                return -1
            return 0

        # in CCW triangle (a, u, v) the segment exits through (u, v) iff u is
        # right of a->b and v left of it
        entry = None
        for t in self.tris_around(a):
            la = self.tri[t].index(a)
            u = self.tri[t][(la + 1) % 3]
            v = self.tri[t][(la + 2) % 3]
            if side(u) == 0 and self._between(a, b, u):
                return "vertex", u
            if side(v) == 0 and self._between(a, b, v):
                return "vertex", v
            if side(u) < 0 and side(v) > 0:
                entry = (t, u, v)
                break
        if entry is None:
            raise GeometryError(f"no corridor from {a} toward {b}")

        t, u, v = entry
        edges = []
        guard = 0
        while True:
            guard += 1
            if guard > len(self.tri) + 100:
                raise GeometryError("corridor march did not terminate")
            if _key(u, v) in self.constrained:
                raise GeometryTooFine(
                    f"constraint ({a},{b}) crosses existing constraint ({u},{v})"
                )
            edges.append(_key(u, v))
            verts = self.tri[t]
            i = next(
                j for j in range(3)
                if verts[(j + 1) % 3] in (u, v) and verts[(j + 2) % 3] in (u, v)
            )
            s = self.nei[t][i]
            if s < 0:
                raise GeometryError("corridor left the domain")
            d = next(w for w in self.tri[s] if w != u and w != v)
            if d == b:
                return "edges", edges
            sd = side(d)
            if sd == 0:
                if self._between(a, b, d):
                    return "vertex", d
                raise GeometryError("corridor degenerated")
            # u stays on the right of a->b, v on the left
            t = s
            if sd > 0:
                v = d
            else:
                u = d

    def _clear_corridor(self, a, b):
        """Flip away all edges crossing a-b; returns a blocking collinear
        vertex if one is found, else None once the corridor is clear."""
        kind, payload = self._corridor(a, b)
        if kind == "vertex":
            return payload
        ax, ay = self._p(a)
        bx, by = self._p(b)
        q = deque(payload)
        guard = 0
        while q:
            guard += 1
            if guard > 30 * (len(payload) + 10) ** 2:
                raise GeometryError(f"edge recovery did not converge for ({a},{b})")
            u, v = q.popleft()
            fe = self.find_edge(u, v)
            if fe is None:
                continue  # already flipped away
            t, i = fe
            p = self.tri[t][i]
            s, d = self._apex_across(t, i)
            if d is None:
                continue
            # flip only strictly convex quads, taking u, v in t's CCW order
            ut = self.tri[t][(i + 1) % 3]
            vt = self.tri[t][(i + 2) % 3]
            if not (
                _orient(*self._p(p), *self._p(ut), *self._p(d)) > 0
                and _orient(*self._p(p), *self._p(d), *self._p(vt)) > 0
            ):
                q.append((u, v))
                continue
            self.flip(t, i)
            # requeue the new diagonal if it still crosses the open segment
            op = _orient(ax, ay, bx, by, *self._p(p))
            od = _orient(ax, ay, bx, by, *self._p(d))
            if op * od < 0:
                oa = _orient(*self._p(p), *self._p(d), ax, ay)
                ob = _orient(*self._p(p), *self._p(d), bx, by)
                if oa * ob < 0:
                    q.append(_key(p, d))
        return None

    # -- refinement --------------------------------------------------------

    def _edge_len(self, a, b):
        return float(np.hypot(self.px[a] - self.px[b], self.py[a] - self.py[b]))

    def _encroached(self, a, b):
        """Diametral-circle test via the apexes of the incident triangles."""
        fe = self.find_edge(a, b)
        if fe is None:
            return False
        t, i = fe
        ax, ay = self._p(a)
        bx, by = self._p(b)
        for tt, apex in ((t, self.tri[t][i]), self._apex_across(t, i)):
            if apex is None:
                continue
            wx, wy = self._p(apex)
            if (ax - wx) * (bx - wx) + (ay - wy) * (by - wy) < -1e-14:
                return True
        return False

    def _apex_across(self, t, i):
        s = self.nei[t][i]
        if s < 0:
            return -1, None
        b = self.tri[t][(i + 1) % 3]
        c = self.tri[t][(i + 2) % 3]
        return s, next(v for v in self.tri[s] if v != b and v != c)

    def _tri_parent(self, t):
        for i in range(3):
            key = _key(self.tri[t][(i + 1) % 3], self.tri[t][(i + 2) % 3])
            par = self.constrained.get(key, None)
            if par is not None and par >= 0:
                return par
        return -1

    def _bad_triangle(self, t, size: SizeField, h_min):
        verts = self.tri[t]
        pts = [(self.px[v], self.py[v]) for v in verts]
        L = [
            np.hypot(pts[(i + 1) % 3][0] - pts[(i + 2) % 3][0],
                     pts[(i + 1) % 3][1] - pts[(i + 2) % 3][1])
            for i in range(3)
        ]
        cx = (pts[0][0] + pts[1][0] + pts[2][0]) / 3.0
        cy = (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0
        h_t = size(cx, cy, self._tri_parent(t))
        if max(L) > h_t * 1.0001:
            return True
        if min(L) <= h_min:
            return False  # quality best-effort below the floor
        # the smallest angle sits opposite the shortest edge
        i = int(np.argmin(L))
        a, b, c = L[i], L[(i + 1) % 3], L[(i + 2) % 3]
        cosang = (b * b + c * c - a * a) / (2.0 * b * c)
        return cosang > np.cos(np.radians(MIN_ANGLE_DEG))

    def refine(self, size: SizeField, h_min, max_insertions):
        inserted = 0

        def budget():
            nonlocal inserted
            inserted += 1
            if inserted > max_insertions:
                raise GeometryTooFine(
                    "mesh refinement exceeded the insertion budget; "
                    "h_min is too small for the feature density"
                )

        def queue_dirty_segments(seg_q):
            for td in self.dirty:
                if self.tri[td] is None:
                    continue
                for i in range(3):
                    key = _key(self.tri[td][(i + 1) % 3], self.tri[td][(i + 2) % 3])
                    if key in self.constrained:
                        seg_q.append(key)

        def split_segment(key, seg_q, tri_q):
            a, b = key
            mx = 0.5 * (self.px[a] + self.px[b])
            my = 0.5 * (self.py[a] + self.py[b])
            self.dirty.clear()
            budget()
            _, created = self.insert_point(mx, my, merge_tol=1e-13)
            if created:
                # both halves land in the dirty set and get re-queued there
                queue_dirty_segments(seg_q)
                tri_q.extend(self.dirty)

        seg_q: deque = deque(sorted(self.constrained.keys()))
        tri_q: deque = deque(self.alive())

        guard = 0
        while seg_q or tri_q:
            guard += 1
            if guard > 100 * max_insertions + 10000:
                raise GeometryError("refinement loop stalled")
            if seg_q:
                key = seg_q.popleft()
                if key not in self.constrained:
                    continue
                a, b = key
                parent = self.constrained[key]
                length = self._edge_len(a, b)
                mx = 0.5 * (self.px[a] + self.px[b])
                my = 0.5 * (self.py[a] + self.py[b])
                h_t = size(mx, my, parent)
                if length > h_t * 1.0001 or (
                    length > 2.0 * h_min and self._encroached(a, b)
                ):
                    split_segment(key, seg_q, tri_q)
                continue
            t = tri_q.popleft()
            if self.tri[t] is None or not self._bad_triangle(t, size, h_min):
                continue
            verts = self.tri[t]
            try:
                ccx, ccy = _circumcenter(*self._p(verts[0]), *self._p(verts[1]), *self._p(verts[2]))
            except ZeroDivisionError:
                continue
            loc, blocked = self.locate(
                float(np.clip(ccx, self.rect.x0, self.rect.x1)),
                float(np.clip(ccy, self.rect.y0, self.rect.y1)),
                stop_at_constrained=False,
            )
            # if the circumcenter would encroach a constrained edge of its
            # cavity, split that edge instead (Ruppert's rule)
            enc = self._encroached_by(ccx, ccy, loc)
            if enc is not None:
                if self._edge_len(*enc) > 2.0 * h_min:
                    split_segment(enc, seg_q, tri_q)
                    tri_q.append(t)
                continue
            self.dirty.clear()
            budget()
            _, created = self.insert_point(ccx, ccy, merge_tol=max(self.tol, 1e-12))
            if created:
                queue_dirty_segments(seg_q)
                tri_q.extend(self.dirty)

    def _encroached_by(self, x, y, t_at):
        """A constrained edge whose diametral circle contains (x, y), searched
        around the location triangle; None if there is none nearby."""
        seen = set()
        frontier = [t_at]
        for _ in range(64):
            if not frontier:
                break
            t = frontier.pop()
            if t < 0 or t in seen or self.tri[t] is None:
                continue
            seen.add(t)
            verts = self.tri[t]
            for i in range(3):
                a, b = verts[(i + 1) % 3], verts[(i + 2) % 3]
                key = _key(a, b)
                if key in self.constrained:
                    ax, ay = self._p(a)
                    bx, by = self._p(b)
                    if (ax - x) * (bx - x) + (ay - y) * (by - y) < -1e-14:
                        return key
                else:
                    frontier.append(self.nei[t][i])
        return None


def _triangulate_raw(domain: Rectangle, decomposed, size_spec: MeshSizeSpec):
    """Run the full CDT + refinement pipeline.

    Returns (nodes, triangles, frac_edges, point_node): frac_edges maps a
    sorted node pair to its fracture id; point_node maps decomposed-point
    index to mesh node id.
    """
    tol = max(decomposed.tol, 1e-12 * domain.diagonal)
    T = _Triangulation(domain, tol)

    point_node = {}
    for k, pt in enumerate(decomposed.points):
        vid, _ = T.insert_point(float(pt[0]), float(pt[1]), merge_tol=tol)
        point_node[k] = vid

    for e, parent in zip(decomposed.edges, decomposed.edge_parent):
        T.recover_edge(point_node[int(e[0])], point_node[int(e[1])], int(parent))

    size = SizeField(decomposed, size_spec)
    h_min = min(size_spec.h_min, size_spec.h_background)
    budget = max(2000, int(80 * domain.area / h_min**2))
    T.refine(size, h_min, budget)

    nodes = np.column_stack([T.px, T.py])
    tris = np.array([t for t in T.tri if t is not None], dtype=np.int64)
    # reject any inverted triangle outright
    for t in tris:
        if _orient(*nodes[t[0]], *nodes[t[1]], *nodes[t[2]]) <= 0:
            raise GeometryError("triangulation produced a non-CCW triangle")
    frac_edges = {k: v for k, v in T.constrained.items() if v >= 0}
    return nodes, tris, frac_edges, point_node


def triangulate_constrained(domain: Rectangle, decomposed, size_spec: MeshSizeSpec) -> Grid:
    """Conforming triangular grid of the domain; constraint edges appear as
    triangle edges and are recorded in grid.tags['frac_edges']."""
    nodes, tris, frac_edges, point_node = _triangulate_raw(domain, decomposed, size_spec)
    g = Grid.from_triangles(nodes, tris)
    compute_geometry(g)
    g.tags["frac_edges"] = frac_edges
    g.tags["point_node"] = point_node
    return g
