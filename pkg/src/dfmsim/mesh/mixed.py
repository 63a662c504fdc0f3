"""Mixed-dimensional grid assembly: slit 2D matrix + 1D fractures + 0D points.

The triangulation conforms to every fracture; this module duplicates matrix
nodes along each fracture so the 2D grid is topologically slit (two
boundary-like faces per fracture edge, one per side), builds one 1D grid per
fracture (slit again at 0D intersection points so the point grid mediates
all branch-to-branch flow), and records face/cell pairings in InterfaceMaps.

Interior fracture tips keep a single node: the two sides of the slit are
pinned there, which is the physical crack-tip condition. Endpoints on the
domain boundary are duplicated, so a fracture crossing the whole domain
separates it fully.
"""

from __future__ import annotations

import numpy as np

from ..errors import GeometryError, NoFractures
from .decompose import decompose_network_2d
from .grid import Grid, Rectangle, compute_geometry
from .sizing import MeshSizeSpec
from .triangulate import _triangulate_raw


class InterfaceMap:
    """Face/cell pairing between a grid of dim d and one of dim d-1.

    ``pairs[k] = (face index in higher, cell index in lower)``; ``sides[k]``
    is +1/-1 and distinguishes the two sides of the lower-dim object.
    """

    def __init__(self, higher: Grid, lower: Grid, pairs, sides):
        self.higher = higher
        self.lower = lower
        self.pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        self.sides = np.asarray(sides, dtype=np.int64).reshape(-1)
        if len(self.sides) != len(self.pairs):
            raise ValueError("pairs and sides must have equal length")
        self.tags: dict = {}

    @property
    def n_pairs(self):
        return len(self.pairs)

    def check_conformity(self, tol):
        """Geometric coincidence of every paired face and cell."""
        for (f, c), _s in zip(self.pairs, self.sides):
            fc = self.higher.face_centers[f]
            cc = self.lower.cell_centers[c]
            if np.linalg.norm(fc - cc) > tol:
                raise GeometryError(
                    f"interface pair ({f},{c}) centers differ by "
                    f"{np.linalg.norm(fc - cc):.3e}"
                )
            fm = self.higher.face_areas[f]
            cm = self.lower.cell_volumes[c]
            if abs(fm - cm) > 1e-10 * max(abs(cm), 1.0):
                raise GeometryError(
                    f"interface pair ({f},{c}) measures differ: {fm} vs {cm}"
                )

    def __repr__(self):
        return (
            f"InterfaceMap({self.higher.dim}D->{self.lower.dim}D, "
            f"{self.n_pairs} pairs)"
        )


class MixedDimGrid:
    """Dimension-ordered grid collection plus interface maps.

    Iteration and dof orders follow: descending dimension, insertion order
    within a dimension, cell index within a grid.
    """

    def __init__(self, grids_by_dim: dict, interfaces):
        self.grids = {d: list(gs) for d, gs in sorted(grids_by_dim.items(), reverse=True) if gs}
        self.interfaces = list(interfaces)
        dims = sorted(self.grids, reverse=True)
        for lo, hi in zip(dims[1:], dims[:-1]):
            if hi - lo != 1:
                raise GeometryError(f"dimension gap between {hi} and {lo}")
        # attachment slots for parameters and solution fields
        self._props: dict = {}

    @property
    def dim_max(self):
        return max(self.grids) if self.grids else -1

    def subdomains(self, dim=None):
        if dim is not None:
            return list(self.grids.get(dim, []))
        out = []
        for d in sorted(self.grids, reverse=True):
            out.extend(self.grids[d])
        return out

    def interfaces_of(self, grid):
        return [i for i in self.interfaces if i.higher is grid or i.lower is grid]

    def between(self, higher, lower):
        for i in self.interfaces:
            if i.higher is higher and i.lower is lower:
                return i
        return None

    def props(self, obj) -> dict:
        """Mutable per-grid / per-interface attachment slot."""
        if id(obj) not in self._props:
            self._props[id(obj)] = {}
        return self._props[id(obj)]

    def n_cells(self):
        return sum(g.n_cells for g in self.subdomains())

    def __repr__(self):
        per_dim = ", ".join(
            f"{len(gs)}x{d}D" for d, gs in sorted(self.grids.items(), reverse=True)
        )
        return f"MixedDimGrid({per_dim}, {len(self.interfaces)} interfaces)"


def _slit_along_fractures(nodes, tris, frac_pairs):
    """Duplicate nodes so the mesh is disconnected across fracture edges.

    Around each node on a fracture, incident triangles are grouped into fans
    connected through non-fracture edges; every fan beyond the first gets a
    node copy. Returns (new_nodes, new_tris, orig_of) with orig_of mapping
    every (possibly copied) node to its original index.
    """
    tris = np.array(tris, dtype=np.int64)
    n_orig = len(nodes)
    node_tris: dict[int, list[int]] = {}
    for ti, t in enumerate(tris):
        for c in t:
            node_tris.setdefault(int(c), []).append(ti)

    frac_nodes = sorted({v for pair in frac_pairs for v in pair})
    extra_coords = []
    orig_of = list(range(n_orig))

    for n in frac_nodes:
        inc = node_tris[n]
        # union triangles sharing a non-fracture edge through n
        parent = {t: t for t in inc}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        edge_tris: dict[int, list[int]] = {}
        for t in inc:
            for c in tris[t]:
                if int(c) != n:
                    edge_tris.setdefault(int(c), []).append(t)
        for m, ts in edge_tris.items():
            if (min(n, m), max(n, m)) in frac_pairs:
                continue
            for t in ts[1:]:
                ra, rb = find(ts[0]), find(t)
                if ra != rb:
                    parent[rb] = ra
        comps: dict[int, list[int]] = {}
        for t in inc:
            comps.setdefault(find(t), []).append(t)
        if len(comps) == 1:
            continue
        groups = sorted(comps.values(), key=min)
        for grp in groups[1:]:
            new_id = n_orig + len(extra_coords)
            extra_coords.append(nodes[n])
            orig_of.append(n)
            for t in grp:
                tris[t][tris[t] == n] = new_id

    if extra_coords:
        nodes = np.vstack([nodes, np.asarray(extra_coords)])
    return nodes, tris, np.asarray(orig_of, dtype=np.int64)


def _fracture_chain(fid, frac_edges, mesh_nodes, seg):
    """Order the constraint edges of one fracture into a node chain."""
    edges = [e for e, par in frac_edges.items() if par == fid]
    if not edges:
        raise GeometryError(f"fracture {fid} left no edges in the mesh")
    p0 = np.asarray(seg.p0, dtype=float)
    d = np.asarray(seg.p1, dtype=float) - p0
    L2 = float(d @ d)

    def param(v):
        return float((mesh_nodes[v] - p0) @ d) / L2

    edges = sorted(edges, key=lambda e: param(e[0]) + param(e[1]))
    chain = []
    for a, b in edges:
        lo, hi = (a, b) if param(a) <= param(b) else (b, a)
        if not chain:
            chain = [lo, hi]
        else:
            if lo != chain[-1]:
                raise GeometryError(f"fracture {fid} edges do not chain")
            chain.append(hi)
    return chain


def build_mixed_grid(domain: Rectangle, network, size: MeshSizeSpec) -> MixedDimGrid:
    """Mesh the domain and assemble matrix, fracture, and point grids."""
    dec = decompose_network_2d(domain, network)
    nodes, tris, frac_edges, point_node = _triangulate_raw(domain, dec, size)

    if not frac_edges:
        g2 = compute_geometry(Grid.from_triangles(nodes, tris))
        g2.tags["fracture_faces"] = {}
        return MixedDimGrid({2: [g2]}, [])

    frac_pairs = set(frac_edges.keys())
    slit_nodes, slit_tris, orig_of = _slit_along_fractures(nodes, tris, frac_pairs)
    g2 = compute_geometry(Grid.from_triangles(slit_nodes, slit_tris))

    # locate the two slit faces of every fracture edge
    faces_of_pair: dict[tuple, list[int]] = {}
    for f in range(g2.n_faces):
        a, b = (int(orig_of[v]) for v in g2.face_nodes[f])
        key = (min(a, b), max(a, b))
        if key in frac_pairs:
            faces_of_pair.setdefault(key, []).append(f)

    # 0D points: decomposed points where >= 2 fractures meet
    zero_pts = sorted(
        k for k, parents in dec.point_parents.items() if len(parents) >= 2
    )
    zero_mesh_node = {k: point_node[k] for k in zero_pts}
    mesh_node_zero = {v: k for k, v in zero_mesh_node.items()}

    frac_ids = sorted({par for par in frac_edges.values()})
    one_d: dict[int, Grid] = {}
    interfaces: list[InterfaceMap] = []

    for fid in frac_ids:
        seg = network.fracture_by_id(fid)
        chain = _fracture_chain(fid, frac_edges, nodes, seg)
        # split the chain at interior 0D nodes: duplicate the local node
        loc_coords = [nodes[chain[0]]]
        loc_mesh = [chain[0]]
        cells = []
        cell_pairs = []  # original sorted mesh-node pair per 1D cell
        for k in range(1, len(chain)):
            v = chain[k]
            cells.append((len(loc_mesh) - 1, len(loc_mesh)))
            cell_pairs.append((min(chain[k - 1], v), max(chain[k - 1], v)))
            loc_coords.append(nodes[v])
            loc_mesh.append(v)
            if v in mesh_node_zero and k < len(chain) - 1:
                loc_coords.append(nodes[v])  # coincident copy opens the slit
                loc_mesh.append(v)
        g1 = compute_geometry(Grid.line(np.asarray(loc_coords), cells))
        g1.tags["fracture_id"] = fid
        g1.tags["cell_mesh_pairs"] = cell_pairs
        g1.tags["local_mesh_node"] = loc_mesh
        one_d[fid] = g1

    # 2D -> 1D interfaces, fracture id order
    for fid in frac_ids:
        g1 = one_d[fid]
        seg = network.fracture_by_id(fid)
        tang = np.asarray(seg.p1, dtype=float) - np.asarray(seg.p0, dtype=float)
        pairs = []
        sides = []
        for c, key in enumerate(g1.tags["cell_mesh_pairs"]):
            faces = faces_of_pair.get(key, [])
            if len(faces) not in (1, 2):
                raise GeometryError(
                    f"fracture edge {key} has {len(faces)} matrix faces"
                )
            for f in sorted(faces):
                cell = int(g2.face_cells[f, 0])
                rel = g2.cell_centers[cell] - g2.face_centers[f]
                side = 1 if tang[0] * rel[1] - tang[1] * rel[0] > 0 else -1
                pairs.append((f, c))
                sides.append(side)
        interfaces.append(InterfaceMap(g2, g1, pairs, sides))

    # 0D grids and 1D -> 0D interfaces, decomposed-point order
    zero_d: list[Grid] = []
    for k in zero_pts:
        v = zero_mesh_node[k]
        g0 = compute_geometry(Grid.point(nodes[v]))
        g0.tags["mesh_node"] = v
        zero_d.append(g0)
        pt = nodes[v]
        for fid in sorted(dec.point_parents[k]):
            if fid not in one_d:
                continue
            g1 = one_d[fid]
            seg = network.fracture_by_id(fid)
            p0 = np.asarray(seg.p0, dtype=float)
            d = np.asarray(seg.p1, dtype=float) - p0
            L2 = float(d @ d)
            t_pt = float((pt - p0) @ d) / L2
            loc_mesh = g1.tags["local_mesh_node"]
            pairs = []
            sides = []
            for f in range(g1.n_faces):
                if loc_mesh[int(g1.face_nodes[f, 0])] != v:
                    continue
                cell = int(g1.face_cells[f, 0])
                if g1.face_cells[f, 1] >= 0:
                    raise GeometryError(
                        f"fracture {fid} face at 0D point {k} is interior"
                    )
                t_c = float((g1.cell_centers[cell] - p0) @ d) / L2
                pairs.append((f, 0))
                sides.append(1 if t_c > t_pt else -1)
            if not pairs:
                raise GeometryError(
                    f"0D point {k} has no faces on fracture {fid}"
                )
            interfaces.append(InterfaceMap(g1, g0, pairs, sides))

    g2.tags["fracture_faces"] = {
        f: (frac_edges[key], key)
        for key, faces in faces_of_pair.items()
        for f in faces
    }
    grids = {2: [g2], 1: [one_d[f] for f in frac_ids]}
    if zero_d:
        grids[0] = zero_d
    return MixedDimGrid(grids, interfaces)


def dfn_mode(mdg: MixedDimGrid) -> MixedDimGrid:
    """Drop the 2D matrix grid, keeping fracture and intersection grids."""
    if not mdg.subdomains(1):
        raise NoFractures("dfn mode requires at least one 1D grid")
    grids = {d: mdg.subdomains(d) for d in (1, 0) if mdg.subdomains(d)}
    keep = {id(g) for gs in grids.values() for g in gs}
    interfaces = [
        i for i in mdg.interfaces if id(i.higher) in keep and id(i.lower) in keep
    ]
    return MixedDimGrid(grids, interfaces)
