"""Grids of dimension 0, 1 and 2 embedded in the 2D plane.

A Grid stores topology (nodes, face->node, cell->face incidence) and, after
:func:`compute_geometry`, the metric fields every finite-volume scheme needs:
cell centers and volumes, face centers, face normals scaled by measure, and
the face->cell adjacency with orientation signs.

Conventions
-----------
- 2D: faces are edges (2 nodes), face measure = edge length, volumes = areas.
- 1D: faces are single nodes, face measure = 1, volumes = segment lengths.
- 0D: a single cell with volume 1 by convention and no faces; physical
  cross-sections enter through parameters, never through the grid.
- face_cells[f] = (cell the normal points out of, cell it points into),
  with -1 marking a missing neighbor (boundary or slit face).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateCell, GeometryError


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangular domain [x0, x1] x [y0, y1]."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise GeometryError(f"degenerate rectangle {self}")

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width, self.height))

    @property
    def corners(self) -> np.ndarray:
        return np.array(
            [[self.x0, self.y0], [self.x1, self.y0], [self.x1, self.y1], [self.x0, self.y1]]
        )

    def contains(self, pts, tol=0.0):
        pts = np.atleast_2d(pts)
        return (
            (pts[:, 0] >= self.x0 - tol)
            & (pts[:, 0] <= self.x1 + tol)
            & (pts[:, 1] >= self.y0 - tol)
            & (pts[:, 1] <= self.y1 + tol)
        )


class Grid:
    """Unstructured grid of fixed dimension with CSR cell->face incidence."""

    def __init__(self, dim, nodes, face_nodes, cell_face_ptr, cell_face_ind):
        self.dim = int(dim)
        self.nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
        self.face_nodes = np.asarray(face_nodes, dtype=np.int64).reshape(
            -1, 2 if dim == 2 else 1
        )
        self.cell_face_ptr = np.asarray(cell_face_ptr, dtype=np.int64)
        self.cell_face_ind = np.asarray(cell_face_ind, dtype=np.int64)

        # Geometry fields, filled by compute_geometry.
        self.cell_centers = None
        self.cell_volumes = None
        self.face_centers = None
        self.face_normals = None
        self.face_areas = None
        self.cell_face_sign = None
        self.face_cells = None

        # Free-form slots for parameters and bookkeeping (fracture ids,
        # original node maps, attached physics parameters).
        self.tags: dict = {}

    @property
    def n_cells(self) -> int:
        return len(self.cell_face_ptr) - 1

    @property
    def n_faces(self) -> int:
        return len(self.face_nodes)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def cell_faces(self, c) -> np.ndarray:
        return self.cell_face_ind[self.cell_face_ptr[c] : self.cell_face_ptr[c + 1]]

    def cell_signs(self, c) -> np.ndarray:
        return self.cell_face_sign[self.cell_face_ptr[c] : self.cell_face_ptr[c + 1]]

    def cell_nodes(self, c) -> np.ndarray:
        return np.unique(self.face_nodes[self.cell_faces(c)])

    def boundary_faces(self) -> np.ndarray:
        return np.flatnonzero(self.face_cells[:, 1] < 0)

    def __repr__(self):
        return f"Grid(dim={self.dim}, cells={self.n_cells}, faces={self.n_faces})"

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_triangles(nodes, triangles) -> "Grid":
        nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
        tris = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
        edges = np.concatenate(
            [tris[:, [1, 2]], tris[:, [2, 0]], tris[:, [0, 1]]], axis=0
        )
        edges_sorted = np.sort(edges, axis=1)
        face_nodes, inverse = np.unique(edges_sorted, axis=0, return_inverse=True)
        n = len(tris)
        cell_face_ind = np.empty(3 * n, dtype=np.int64)
        cell_face_ind[0::3] = inverse[:n]
        cell_face_ind[1::3] = inverse[n : 2 * n]
        cell_face_ind[2::3] = inverse[2 * n :]
        ptr = np.arange(0, 3 * n + 1, 3)
        g = Grid(2, nodes, face_nodes, ptr, cell_face_ind)
        g.tags["triangles"] = tris
        return g

    @staticmethod
    def from_polygons(nodes, cells) -> "Grid":
        """cells: list of node-index loops (each ordered around the polygon)."""
        nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
        edge_list = []
        cell_edges = []
        for loop in cells:
            loop = list(loop)
            eids = []
            for k in range(len(loop)):
                a, b = loop[k], loop[(k + 1) % len(loop)]
                edge_list.append((min(a, b), max(a, b)))
                eids.append(len(edge_list) - 1)
            cell_edges.append(eids)
        edges = np.asarray(edge_list, dtype=np.int64)
        face_nodes, inverse = np.unique(edges, axis=0, return_inverse=True)
        ind = []
        ptr = [0]
        for eids in cell_edges:
            ind.extend(inverse[e] for e in eids)
            ptr.append(len(ind))
        return Grid(2, nodes, face_nodes, np.array(ptr), np.array(ind))

    @staticmethod
    def line(nodes, cells) -> "Grid":
        """1D grid embedded in the plane.

        nodes may contain duplicate coordinates (slit points); faces are the
        node indices referenced by cells, so a duplicated node yields two
        distinct boundary-like faces at the same location.
        """
        nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        used = np.unique(cells)
        face_of_node = {int(n): i for i, n in enumerate(used)}
        face_nodes = used.reshape(-1, 1)
        ind = np.array(
            [face_of_node[int(n)] for pair in cells for n in pair], dtype=np.int64
        )
        ptr = np.arange(0, 2 * len(cells) + 1, 2)
        return Grid(1, nodes, face_nodes, ptr, ind)

    @staticmethod
    def point(coord) -> "Grid":
        g = Grid(0, np.asarray(coord, dtype=float).reshape(1, 2),
                 np.zeros((0, 1)), np.array([0, 0]), np.zeros(0))
        return g


def _ordered_loop(face_nodes_pairs):
    """Order a set of edges (pairs) into a closed vertex loop."""
    adj: dict[int, list[int]] = {}
    for a, b in face_nodes_pairs:
        adj.setdefault(int(a), []).append(int(b))
        adj.setdefault(int(b), []).append(int(a))
    start = min(adj)
    loop = [start]
    prev = None
    cur = start
    for _ in range(len(face_nodes_pairs)):
        nxts = [n for n in adj[cur] if n != prev]
        if not nxts:
            raise DegenerateCell(f"cell boundary is not a closed loop at node {cur}")
        prev, cur = cur, nxts[0]
        if cur == start:
            break
        loop.append(cur)
    if len(loop) != len(face_nodes_pairs):
        raise DegenerateCell("cell boundary does not form a single loop")
    return loop


def compute_geometry(grid: Grid) -> Grid:
    """Fill all metric fields and orientation signs; validate closedness."""
    if grid.dim == 0:
        grid.cell_centers = grid.nodes.copy()
        grid.cell_volumes = np.ones(1)
        grid.face_centers = np.zeros((0, 2))
        grid.face_normals = np.zeros((0, 2))
        grid.face_areas = np.zeros(0)
        grid.cell_face_sign = np.zeros(0, dtype=np.int64)
        grid.face_cells = np.zeros((0, 2), dtype=np.int64)
        return grid

    if grid.dim == 1:
        _geometry_1d(grid)
    else:
        _geometry_2d(grid)

    _orient_and_pair(grid)
    _check_closedness(grid)
    return grid


def _geometry_1d(grid):
    grid.face_centers = grid.nodes[grid.face_nodes[:, 0]]
    grid.face_areas = np.ones(grid.n_faces)
    nc = grid.n_cells
    grid.cell_centers = np.zeros((nc, 2))
    grid.cell_volumes = np.zeros(nc)
    for c in range(nc):
        f = grid.cell_faces(c)
        p = grid.face_centers[f]
        grid.cell_centers[c] = p.mean(axis=0)
        grid.cell_volumes[c] = np.linalg.norm(p[1] - p[0])
        if grid.cell_volumes[c] <= 0:
            raise DegenerateCell(f"1D cell {c} has zero length")
    # Face normal: unit tangent pointing away from the lowest-index incident
    # cell; magnitude equals the unit face measure.
    grid.face_normals = np.zeros((grid.n_faces, 2))
    owner = np.full(grid.n_faces, -1, dtype=np.int64)
    for c in range(nc):
        for f in grid.cell_faces(c):
            if owner[f] < 0:
                owner[f] = c
    for f in range(grid.n_faces):
        t = grid.face_centers[f] - grid.cell_centers[owner[f]]
        nt = np.linalg.norm(t)
        if nt <= 0:
            raise DegenerateCell(f"1D face {f} coincides with its cell center")
        grid.face_normals[f] = t / nt


def _geometry_2d(grid):
    fn = grid.face_nodes
    p0 = grid.nodes[fn[:, 0]]
    p1 = grid.nodes[fn[:, 1]]
    grid.face_centers = 0.5 * (p0 + p1)
    edge = p1 - p0
    grid.face_areas = np.linalg.norm(edge, axis=1)
    if np.any(grid.face_areas <= 0):
        raise DegenerateCell("zero-length face")
    # Normal = edge rotated -90 deg; orientation fixed per cell by signs.
    grid.face_normals = np.column_stack([edge[:, 1], -edge[:, 0]])

    nc = grid.n_cells
    grid.cell_centers = np.zeros((nc, 2))
    grid.cell_volumes = np.zeros(nc)
    tris = grid.tags.get("triangles")
    for c in range(nc):
        if tris is not None:
            loop = tris[c]
        else:
            loop = _ordered_loop(grid.face_nodes[grid.cell_faces(c)])
        pts = grid.nodes[loop]
        x, y = pts[:, 0], pts[:, 1]
        area = 0.5 * (x @ np.roll(y, -1) - np.roll(x, -1) @ y)
        if abs(area) <= 1e-14 * max(1.0, float(np.abs(pts).max()) ** 2):
            raise DegenerateCell(f"cell {c} has zero area")
        grid.cell_centers[c] = pts.mean(axis=0)
        grid.cell_volumes[c] = abs(area)


def _orient_and_pair(grid):
    """Compute orientation signs geometrically and the face->cell table."""
    nf = grid.n_faces
    sign = np.zeros(len(grid.cell_face_ind), dtype=np.int64)
    face_cells = np.full((nf, 2), -1, dtype=np.int64)
    count = np.zeros(nf, dtype=np.int64)
    for c in range(grid.n_cells):
        lo, hi = grid.cell_face_ptr[c], grid.cell_face_ptr[c + 1]
        for k in range(lo, hi):
            f = grid.cell_face_ind[k]
            s = 1 if grid.face_normals[f] @ (grid.face_centers[f] - grid.cell_centers[c]) > 0 else -1
            sign[k] = s
            count[f] += 1
            col = 0 if s > 0 else 1
            if face_cells[f, col] >= 0:
                raise GeometryError(f"face {f} has two cells on the same side")
            face_cells[f, col] = c
    if np.any(count > 2):
        raise GeometryError("face with more than two incident cells")
    # Boundary faces: flip stored normal outward so the single cell sits in
    # column 0 with sign +1.
    for f in np.flatnonzero(count == 1):
        if face_cells[f, 0] < 0:
            face_cells[f, 0] = face_cells[f, 1]
            face_cells[f, 1] = -1
            grid.face_normals[f] = -grid.face_normals[f]
            c = face_cells[f, 0]
            lo, hi = grid.cell_face_ptr[c], grid.cell_face_ptr[c + 1]
            for k in range(lo, hi):
                if grid.cell_face_ind[k] == f:
                    sign[k] = 1
    grid.cell_face_sign = sign
    grid.face_cells = face_cells


def _check_closedness(grid):
    for c in range(grid.n_cells):
        f = grid.cell_faces(c)
        s = grid.cell_signs(c)
        resid = (s[:, None] * grid.face_normals[f]).sum(axis=0)
        scale = max(grid.cell_volumes[c], grid.face_areas[f].max())
        if np.linalg.norm(resid) > 1e-10 * max(scale, 1e-300):
            raise GeometryError(
                f"cell {c} signed normals do not close: residual {resid}"
            )


# -- structured helpers (oracles and tests) ---------------------------


def cart_grid_2d(nx, ny, rect: Rectangle, x_lines=None, y_lines=None) -> Grid:
    """Tensor-product quadrilateral grid; optional explicit grid lines."""
    xs = np.asarray(x_lines, dtype=float) if x_lines is not None else np.linspace(rect.x0, rect.x1, nx + 1)
    ys = np.asarray(y_lines, dtype=float) if y_lines is not None else np.linspace(rect.y0, rect.y1, ny + 1)
    nx, ny = len(xs) - 1, len(ys) - 1
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    def nid(i, j):
        return i * (ny + 1) + j

    cells = []
    for i in range(nx):
        for j in range(ny):
            cells.append([nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)])
    g = Grid.from_polygons(nodes, cells)
    return compute_geometry(g)


def structured_triangle_grid(nx, ny, rect: Rectangle) -> Grid:
    """Each Cartesian quad split along the same diagonal."""
    xs = np.linspace(rect.x0, rect.x1, nx + 1)
    ys = np.linspace(rect.y0, rect.y1, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    def nid(i, j):
        return i * (ny + 1) + j

    tris = []
    for i in range(nx):
        for j in range(ny):
            a, b = nid(i, j), nid(i + 1, j)
            c, d = nid(i + 1, j + 1), nid(i, j + 1)
            tris.append([a, b, c])
            tris.append([a, c, d])
    g = Grid.from_triangles(nodes, tris)
    return compute_geometry(g)


def line_grid_on_segment(p0, p1, n_cells) -> Grid:
    """Uniform 1D grid along the segment p0-p1."""
    t = np.linspace(0.0, 1.0, n_cells + 1)[:, None]
    nodes = np.asarray(p0, dtype=float) + t * (np.asarray(p1, dtype=float) - np.asarray(p0, dtype=float))
    cells = np.column_stack([np.arange(n_cells), np.arange(1, n_cells + 1)])
    return compute_geometry(Grid.line(nodes, cells))
