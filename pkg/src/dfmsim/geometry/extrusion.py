"""Elliptic fracture construction and extrusion of outcrop traces to 3D."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .primitives import Fracture3, Segment2


@dataclass(frozen=True)
class ExtrusionSpec:
    """Per-trace extrusion recipe: height (m), dip and strike angles (rad)."""

    height: float
    dip_angle: float
    strike_angle: float = 0.0

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError(f"extrusion height must be positive, got {self.height}")
        if not 0.0 < self.dip_angle <= np.pi / 2:
            raise ValueError(f"dip angle must lie in (0, pi/2], got {self.dip_angle}")


def _rotation_about_axis(axis, angle):
    """Rodrigues rotation matrix about a unit axis."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)


def ellipse_to_polygon(
    center,
    major_axis: float,
    minor_axis: float,
    major_axis_angle: float,
    strike_angle: float,
    dip_angle: float,
    n: int = 16,
) -> Fracture3:
    """Inscribe an n-gon in an ellipse and place it in 3D.

    The polygon starts in the z=0 plane with the major axis along x, is spun
    in-plane by ``major_axis_angle`` about z, then tilted by ``dip_angle``
    about the strike line (cos(strike_angle), sin(strike_angle), 0). Vertices
    sit at uniformly spaced parametric angles starting at 0.
    """
    if n < 3:
        raise ValueError(f"need at least 3 vertices, got {n}")
    if major_axis <= 0 or minor_axis <= 0:
        raise ValueError("ellipse axes must be positive")
    center = np.asarray(center, dtype=float).reshape(3)
    phi = 2.0 * np.pi * np.arange(n) / n
    local = np.column_stack(
        [major_axis * np.cos(phi), minor_axis * np.sin(phi), np.zeros(n)]
    )
    rot = _rotation_about_axis([0.0, 0.0, 1.0], major_axis_angle)
    strike_dir = np.array([np.cos(strike_angle), np.sin(strike_angle), 0.0])
    rot = _rotation_about_axis(strike_dir, dip_angle) @ rot
    return Fracture3(center + local @ rot.T, frac_id=-1)


def extrude_outcrop(traces, specs) -> list[Fracture3]:
    """Extrude 2D traces at z=0 into planar quadrilaterals.

    ``specs`` is either one :class:`ExtrusionSpec` applied to every trace or a
    sequence with one spec per trace. Each quadrilateral contains its trace;
    the surface dips by ``dip_angle`` from horizontal, tilting about the trace
    line, with the up-dip side chosen to the left of the spec's strike
    direction. A vertical dip gives a rectangle of the given height.
    """
    traces = list(traces)
    if isinstance(specs, ExtrusionSpec):
        specs = [specs] * len(traces)
    specs = list(specs)
    if len(specs) != len(traces):
        raise ValueError(f"{len(traces)} traces but {len(specs)} extrusion specs")

    out = []
    for trace, spec in zip(traces, specs):
        if not isinstance(trace, Segment2):
            trace = Segment2(trace[0], trace[1])
        p0, p1 = trace.p0, trace.p1
        t_hat = (p1 - p0) / np.linalg.norm(p1 - p0)
        s_hat = np.array([np.cos(spec.strike_angle), np.sin(spec.strike_angle)])
        if t_hat @ s_hat < 0:
            t_hat = -t_hat
            p0, p1 = p1, p0
        # In-plane direction normal to the trace (to the right of strike).
        m_hat = np.array([t_hat[1], -t_hat[0]])
        up_dip = np.array(
            [
                np.cos(spec.dip_angle) * m_hat[0],
                np.cos(spec.dip_angle) * m_hat[1],
                np.sin(spec.dip_angle),
            ]
        )
        a = np.array([p0[0], p0[1], 0.0])
        b = np.array([p1[0], p1[1], 0.0])
        quad = np.vstack([a, b, b + spec.height * up_dip, a + spec.height * up_dip])
        out.append(Fracture3(quad, frac_id=trace.id))
    return out
