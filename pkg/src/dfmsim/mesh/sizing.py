"""Mesh size targets: uniform, or weighted by distance to fracture features.

Weighted mode grades the target size as half the distance to the nearest
constraint feature that does not belong to the same fracture, clamped to
[h_min, h_background]. Near crossings the nearest foreign fracture is at
distance zero, so the mesh refines to h_min there and coarsens outward.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._accel import maybe_njit
from ..errors import GeometryError


@dataclass(frozen=True)
class MeshSizeSpec:
    h_background: float
    h_min: float = 0.0
    mode: str = "uniform"

    def __post_init__(self):
        if not self.h_background > 0:
            raise GeometryError(f"h_background must be positive, got {self.h_background}")
        hm = self.h_min if self.h_min > 0 else self.h_background / 10.0
        object.__setattr__(self, "h_min", hm)
        if self.h_min > self.h_background:
            raise GeometryError(
                f"h_min {self.h_min} exceeds h_background {self.h_background}"
            )
        if self.mode not in ("uniform", "weighted"):
            raise GeometryError(f"unknown size mode {self.mode!r}")


@maybe_njit(cache=True)
def _min_dist_excluding(x, y, seg_xy, seg_parent, exclude):
    best = 1e300
    for k in range(seg_xy.shape[0]):
        if seg_parent[k] == exclude:
            continue
        ax, ay, bx, by = seg_xy[k, 0], seg_xy[k, 1], seg_xy[k, 2], seg_xy[k, 3]
        dx, dy = bx - ax, by - ay
        den = dx * dx + dy * dy
        t = ((x - ax) * dx + (y - ay) * dy) / den
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        ex, ey = x - (ax + t * dx), y - (ay + t * dy)
        d2 = ex * ex + ey * ey
        if d2 < best:
            best = d2
    return best ** 0.5


class SizeField:
    """Callable target size h(x); incident fracture id excluded in weighted mode."""

    def __init__(self, decomposed, spec: MeshSizeSpec):
        self.spec = spec
        if spec.mode == "weighted" and len(decomposed.edges):
            p = decomposed.points
            e = decomposed.edges
            self.seg_xy = np.column_stack(
                [p[e[:, 0], 0], p[e[:, 0], 1], p[e[:, 1], 0], p[e[:, 1], 1]]
            )
            self.seg_parent = decomposed.edge_parent.astype(np.int64)
        else:
            self.seg_xy = np.zeros((0, 4))
            self.seg_parent = np.zeros(0, dtype=np.int64)

    def __call__(self, x, y, incident=-1):
        spec = self.spec
        if spec.mode == "uniform" or len(self.seg_xy) == 0:
            return spec.h_background
        d = _min_dist_excluding(float(x), float(y), self.seg_xy, self.seg_parent, int(incident))
        return float(np.clip(0.5 * d, spec.h_min, spec.h_background))
