"""Fracture geometry: primitives, intersections, and outcrop extrusion."""

from .extrusion import ExtrusionSpec, ellipse_to_polygon, extrude_outcrop
from .intersect import polygon_intersect_3d, segment_intersect_2d
from .network import find_intersections, verify_on_parents
from .primitives import (
    Fracture3,
    FractureNetwork,
    Intersection,
    IntersectionResult,
    Segment2,
)

__all__ = [
    "ExtrusionSpec",
    "Fracture3",
    "FractureNetwork",
    "Intersection",
    "IntersectionResult",
    "Segment2",
    "ellipse_to_polygon",
    "extrude_outcrop",
    "find_intersections",
    "polygon_intersect_3d",
    "segment_intersect_2d",
    "verify_on_parents",
]
