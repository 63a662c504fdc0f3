"""Shared mixed-dimensional grid invariant checks and network generators.

Used by the mesh tests and the acceptance suite so both enforce the same
tolerances: conformity 1e-9 absolute on centers / 1e-10 relative on measures,
divergence closedness 1e-10 per cell measure, slit faces coincident with
opposite outward normals.
"""

import numpy as np

from dfmsim.errors import GeometryTooFine
from dfmsim.geometry import FractureNetwork, Segment2
from dfmsim.mesh import MeshSizeSpec, Rectangle, build_mixed_grid


def check_divergence(grid):
    for c in range(grid.n_cells):
        acc = np.zeros(2)
        for f, s in zip(grid.cell_faces(c), grid.cell_signs(c)):
            acc += s * grid.face_normals[f]
        lim = 1e-10 * max(grid.cell_volumes[c], 1.0)
        assert np.linalg.norm(acc) <= lim, (
            f"dim-{grid.dim} cell {c} not closed: residual {np.linalg.norm(acc):.3e}"
        )


def check_mixed_grid(mdg, domain):
    dims = sorted(mdg.grids, reverse=True)
    for lo, hi in zip(dims[1:], dims[:-1]):
        assert hi - lo == 1, f"dimension gap: {dims}"

    for g in mdg.subdomains():
        assert (g.cell_volumes > 0).all(), f"non-positive volume in dim-{g.dim} grid"
        if g.dim > 0:
            check_divergence(g)
    g2s = mdg.subdomains(2)
    if g2s:
        area = sum(g.cell_volumes.sum() for g in g2s)
        assert abs(area - domain.area) <= 1e-10 * domain.area, area

    for ifc in mdg.interfaces:
        ifc.check_conformity(1e-9)
        assert ifc.higher.dim == ifc.lower.dim + 1
        assert set(np.unique(ifc.sides)) <= {-1, 1}

    # every 1D grid linked to the 2D grid; interior cells carry one pair per side
    for g1 in mdg.subdomains(1):
        maps = [i for i in mdg.interfaces if i.lower is g1]
        if not g2s:
            continue
        assert len(maps) == 1, f"1D grid has {len(maps)} matrix links"
        ifc = maps[0]
        g2 = ifc.higher
        for c in range(g1.n_cells):
            rows = np.where(ifc.pairs[:, 1] == c)[0]
            assert len(rows) in (1, 2), (c, len(rows))
            if len(rows) == 2:
                assert sorted(int(ifc.sides[r]) for r in rows) == [-1, 1]
                f0, f1 = (int(ifc.pairs[r, 0]) for r in rows)
                assert np.allclose(
                    g2.face_centers[f0], g2.face_centers[f1], atol=1e-12
                ), "slit faces moved apart"
                assert np.allclose(
                    g2.face_normals[f0], -g2.face_normals[f1], atol=1e-12
                ), "slit normals not opposite"
                assert g2.face_cells[f0, 1] == -1 and g2.face_cells[f1, 1] == -1

    # every 0D grid linked to each incident 1D grid
    for g0 in mdg.subdomains(0):
        maps = [i for i in mdg.interfaces if i.lower is g0]
        assert len(maps) >= 2, "0D grid with fewer than two 1D links"
        for m in maps:
            assert m.higher.dim == 1
            assert m.n_pairs in (1, 2)


def random_network(rng, n_max=12):
    """Random non-degenerate fracture set in the unit square."""
    n = int(rng.integers(2, n_max + 1))
    segs = []
    while len(segs) < n:
        p = rng.uniform(0.05, 0.95, 2)
        d = rng.uniform(-0.45, 0.45, 2)
        q = np.clip(p + d, 0.03, 0.97)
        if np.linalg.norm(q - p) >= 0.15:
            segs.append(Segment2(tuple(p), tuple(q)))
    return FractureNetwork(segs)


def build_random_mdg(seed, h=0.3, n_max=12):
    """Deterministic random mixed grid; resamples if the draw is degenerate."""
    rng = np.random.default_rng(seed)
    dom = Rectangle(0.0, 0.0, 1.0, 1.0)
    for _ in range(12):
        net = random_network(rng, n_max=n_max)
        try:
            mdg = build_mixed_grid(dom, net, MeshSizeSpec(h_background=h, mode="uniform"))
            return mdg, dom
        except GeometryTooFine:
            continue
    raise AssertionError(f"seed {seed}: no valid network after 12 draws")
