"""Split a 2D fracture network into non-crossing constraint segments.

Every crossing or touching point becomes a shared endpoint of all incident
pieces, so the triangulator only ever sees segments that meet at vertices.
Points within the network tolerance snap to a single canonical coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import GeometryTooFine
from ..geometry.intersect import segment_intersect_2d
from ..geometry.network import PointRegistry
from ..geometry.primitives import FractureNetwork, Segment2
from .grid import Rectangle


@dataclass
class DecomposedNetwork:
    domain: Rectangle
    points: np.ndarray                      # (M, 2) unique snapped coordinates
    edges: np.ndarray                       # (K, 2) indices into points
    edge_parent: np.ndarray                 # (K,) original fracture id
    point_parents: dict = field(default_factory=dict)   # point -> set of ids
    tol: float = 0.0

    @property
    def intersection_points(self) -> dict:
        """Points shared by two or more fractures (future 0D objects)."""
        return {k: v for k, v in self.point_parents.items() if len(v) >= 2}


def _clip_to_rect(p0, p1, rect: Rectangle, tol):
    """Liang-Barsky parameter interval of segment within the rectangle."""
    d = p1 - p0
    t0, t1 = 0.0, 1.0
    for lo, hi, o, dd in (
        (rect.x0, rect.x1, p0[0], d[0]),
        (rect.y0, rect.y1, p0[1], d[1]),
    ):
        if abs(dd) < 1e-300:
            if o < lo - tol or o > hi + tol:
                return None
            continue
        ta, tb = (lo - o) / dd, (hi - o) / dd
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
        if t0 > t1:
            return None
    return t0, t1


def decompose_network_2d(domain: Rectangle, network: FractureNetwork) -> DecomposedNetwork:
    """Clip fractures to the domain and split them at all mutual crossings.

    Raises GeometryTooFine for collinear overlapping fractures (unsupported)
    and for split pieces that collapse below the tolerance.
    """
    tol = network.tol
    fracs = sorted(network.fractures, key=lambda f: f.id)
    for f in fracs:
        if not isinstance(f, Segment2):
            raise TypeError("decompose_network_2d expects a network of 2D segments")

    # Clip to the domain; drop fractures fully outside.
    kept = []
    for f in fracs:
        iv = _clip_to_rect(f.p0, f.p1, domain, tol)
        if iv is None:
            continue
        t0, t1 = iv
        p0 = f.p0 + t0 * (f.p1 - f.p0)
        p1 = f.p0 + t1 * (f.p1 - f.p0)
        p0 = np.clip(p0, [domain.x0, domain.y0], [domain.x1, domain.y1])
        p1 = np.clip(p1, [domain.x0, domain.y0], [domain.x1, domain.y1])
        if np.linalg.norm(p1 - p0) <= max(tol, 1e-14):
            continue
        kept.append((f.id, p0, p1))

    # Pairwise crossings in ascending id order; record split parameters.
    splits: dict[int, list[float]] = {i: [] for i in range(len(kept))}
    crossings = []  # (coordinate, {id_i, id_j})
    for i in range(len(kept)):
        for j in range(i + 1, len(kept)):
            fi, fj = kept[i], kept[j]
            res = segment_intersect_2d(
                Segment2(fi[1], fi[2], fi[0]), Segment2(fj[1], fj[2], fj[0]), tol
            )
            if res.is_segment:
                raise GeometryTooFine(
                    f"fractures {fi[0]} and {fj[0]} overlap along a segment; "
                    "collinear overlapping fractures are not supported"
                )
            if res.is_point:
                x = res.points[0]
                for k, f in ((i, fi), (j, fj)):
                    d = f[2] - f[1]
                    t = float((x - f[1]) @ d / (d @ d))
                    splits[k].append(min(max(t, 0.0), 1.0))
                crossings.append((x, {fi[0], fj[0]}))

    registry = PointRegistry(tol, 2)
    point_parents: dict[int, set] = {}

    def register(coord, parent_ids):
        idx, _ = registry.register(coord)
        point_parents.setdefault(idx, set()).update(parent_ids)
        return idx

    # Endpoints first (fracture-id order fixes the canonical representatives),
    # then crossing points, which may snap onto endpoints (T-junctions).
    for fid, p0, p1 in kept:
        register(p0, {fid})
        register(p1, {fid})
    for x, parents in crossings:
        register(x, parents)

    edges = []
    edge_parent = []
    for k, (fid, p0, p1) in enumerate(kept):
        length = float(np.linalg.norm(p1 - p0))
        params = sorted({0.0, 1.0, *splits[k]})
        # Merge parameters closer than tol along the segment.
        merged = [params[0]]
        for t in params[1:]:
            if (t - merged[-1]) * length > tol:
                merged.append(t)
        if merged[-1] != 1.0:
            merged[-1] = 1.0
        idxs = [register(p0 + t * (p1 - p0), {fid}) for t in merged]
        for a, b in zip(idxs[:-1], idxs[1:]):
            if a == b:
                raise GeometryTooFine(
                    f"fracture {fid} has features finer than tol={tol:g}"
                )
            edges.append((a, b))
            edge_parent.append(fid)

    return DecomposedNetwork(
        domain=domain,
        points=registry.points.copy(),
        edges=np.asarray(edges, dtype=np.int64).reshape(-1, 2),
        edge_parent=np.asarray(edge_parent, dtype=np.int64),
        point_parents=point_parents,
        tol=tol,
    )
