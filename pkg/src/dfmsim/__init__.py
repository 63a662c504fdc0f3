"""dfmsim: mixed-dimensional discrete-fracture-matrix simulation.

Builds conforming meshes of a 2D porous matrix with embedded 1D fractures and
0D intersections, discretizes single-phase flow, heat transport, and linear
elasticity with frictional fracture slip, and couples them across dimensions
through explicit interface laws. A 3D fracture-network geometry kernel
(intersections, outcrop extrusion) is included.
"""

__version__ = "0.1.0"
