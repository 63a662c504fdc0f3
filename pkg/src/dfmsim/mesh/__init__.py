"""Conforming triangulation and mixed-dimensional grid assembly."""

from .decompose import DecomposedNetwork, decompose_network_2d
from .grid import (
    Grid,
    Rectangle,
    cart_grid_2d,
    compute_geometry,
    line_grid_on_segment,
    structured_triangle_grid,
)
from .mixed import InterfaceMap, MixedDimGrid, build_mixed_grid, dfn_mode
from .sizing import MeshSizeSpec, SizeField
from .triangulate import triangulate_constrained

__all__ = [
    "DecomposedNetwork",
    "Grid",
    "InterfaceMap",
    "MeshSizeSpec",
    "MixedDimGrid",
    "Rectangle",
    "SizeField",
    "build_mixed_grid",
    "cart_grid_2d",
    "compute_geometry",
    "decompose_network_2d",
    "dfn_mode",
    "line_grid_on_segment",
    "structured_triangle_grid",
    "triangulate_constrained",
]
