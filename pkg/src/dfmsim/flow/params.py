"""Flow parameters, boundary conditions, and the cubic-law helper.

Unspecified fields default to unit size: identity permeability, porosity 1,
aperture 1, zero compressibility, zero sources, no-flow boundaries.
"""

from __future__ import annotations

import numpy as np

from ..errors import MissingParameters

BC_NONE = 0
BC_DIRICHLET = 1
BC_NEUMANN = 2


class BoundaryCondition:
    """Per-face condition: Dirichlet pressure or Neumann outward flux.

    Faces left untouched behave as no-flow; interface (slit) faces must stay
    untouched, their exchange is routed through the interface coupling.
    """

    def __init__(self, grid):
        self.kind = np.full(grid.n_faces, BC_NONE, dtype=np.int8)
        self.value = np.zeros(grid.n_faces)

    def set_dirichlet(self, faces, values):
        faces = np.asarray(faces, dtype=int)
        self.kind[faces] = BC_DIRICHLET
        self.value[faces] = values
        return self

    def set_neumann(self, faces, values):
        """values: outward volumetric flux per face (m³/s)."""
        faces = np.asarray(faces, dtype=int)
        self.kind[faces] = BC_NEUMANN
        self.value[faces] = values
        return self

    @property
    def any_dirichlet(self):
        return bool((self.kind == BC_DIRICHLET).any())


def cubic_law_permeability(aperture):
    """Parallel-plate permeability k = a²/12."""
    a = np.asarray(aperture, dtype=float)
    return a * a / 12.0


def _as_tensor_field(grid, permeability, allow_zero=False):
    """Normalize a permeability-like input to the per-dim canonical layout.

    allow_zero admits positive semi-definite tensors (used by transport,
    where zero conductivity means advection-only).
    """
    n = grid.n_cells
    if grid.dim == 0:
        return np.zeros(0)
    if grid.dim == 1:
        k = np.asarray(permeability, dtype=float)
        if k.ndim == 0:
            k = np.full(n, float(k))
        if k.shape != (n,):
            raise ValueError(f"1D permeability must be scalar per cell, got {k.shape}")
        if (k < 0).any() or (not allow_zero and (k == 0).any()):
            raise ValueError("tangential permeability must be positive")
        return k
    k = np.asarray(permeability, dtype=float)
    if k.ndim == 0:
        k = float(k) * np.eye(2)[None, :, :].repeat(n, axis=0)
    elif k.shape == (2, 2):
        k = np.broadcast_to(k, (n, 2, 2)).copy()
    elif k.shape == (n,):
        k = k[:, None, None] * np.eye(2)
    if k.shape != (n, 2, 2):
        raise ValueError(f"2D permeability must broadcast to (n,2,2), got {k.shape}")
    if not np.allclose(k, np.swapaxes(k, 1, 2), atol=1e-14 * max(1.0, np.abs(k).max())):
        raise ValueError("permeability tensors must be symmetric")
    tr = k[:, 0, 0] + k[:, 1, 1]
    det = k[:, 0, 0] * k[:, 1, 1] - k[:, 0, 1] * k[:, 1, 0]
    scale = max(1.0, float(np.abs(k).max())) ** 2
    if allow_zero:
        if (tr < 0).any() or (det < -1e-14 * scale).any():
            raise ValueError("tensors must be positive semi-definite")
    elif (tr <= 0).any() or (det <= 0).any():
        raise ValueError("permeability tensors must be positive definite")
    return k


class FlowParameters:
    """Per-grid material data for Darcy flow."""

    def __init__(self, grid, permeability=1.0, porosity=1.0, aperture=1.0,
                 fluid_compressibility=0.0, source=0.0, bc=None):
        n = grid.n_cells
        self.permeability = _as_tensor_field(grid, permeability)
        self.porosity = np.broadcast_to(np.asarray(porosity, dtype=float), (n,)).copy()
        self.aperture = np.broadcast_to(np.asarray(aperture, dtype=float), (n,)).copy()
        self.fluid_compressibility = float(fluid_compressibility)
        self.source = np.broadcast_to(np.asarray(source, dtype=float), (n,)).copy()
        self.bc = bc if bc is not None else BoundaryCondition(grid)
        if not ((self.porosity > 0) & (self.porosity <= 1)).all():
            raise ValueError("porosity must lie in (0, 1]")
        if grid.dim < 2 and (self.aperture <= 0).any():
            raise ValueError("aperture must be positive on grids of dim < 2")
        if self.fluid_compressibility < 0:
            raise ValueError("fluid compressibility must be non-negative")

    def specific_volume(self, grid):
        """Aperture scaling a^(2-dim): physical volume = V_grid x this."""
        return self.aperture ** (2 - grid.dim)


class InterfaceParameters:
    """Effective normal transmissivity K_n per interface pair."""

    def __init__(self, iface, normal_transmissivity, allow_zero=False):
        kn = np.broadcast_to(
            np.asarray(normal_transmissivity, dtype=float), (iface.n_pairs,)
        ).copy()
        # Flow interfaces must conduct; thermal ones may be insulating.
        if allow_zero:
            if (kn < 0).any():
                raise ValueError("normal transmissivity must be nonnegative")
        elif (kn <= 0).any():
            raise ValueError("normal transmissivity must be positive")
        self.normal_transmissivity = kn


def flow_params(mdg, grid) -> FlowParameters:
    p = mdg.props(grid).get("flow")
    if p is None:
        raise MissingParameters(f"no flow parameters attached to dim-{grid.dim} grid")
    return p


def interface_params(mdg, iface) -> InterfaceParameters:
    p = mdg.props(iface).get("flow")
    if p is None:
        raise MissingParameters(f"no interface parameters attached to {iface!r}")
    return p


def default_interface_params(mdg, iface) -> InterfaceParameters:
    """Ledgered defaults: matrix-fracture K_n = 2 k_normal / a of the lower
    cell; fracture-point K_n = 2 k_tangential(branch) / a_point² so that
    conductance = K_n x (product of apertures) gives the half-pocket value."""
    lo = iface.lower
    hi = iface.higher
    if hi.dim == 2:
        p_lo = flow_params(mdg, lo)
        cells = iface.pairs[:, 1]
        kn = 2.0 * p_lo.permeability[cells] / p_lo.aperture[cells]
    else:
        p_hi = flow_params(mdg, hi)
        p_lo = flow_params(mdg, lo)
        faces = iface.pairs[:, 0]
        cells_hi = hi.face_cells[faces, 0]
        a0 = p_lo.aperture[iface.pairs[:, 1]]
        kn = 2.0 * p_hi.permeability[cells_hi] / (a0 * a0)
    return InterfaceParameters(iface, kn)


def ensure_default_params(mdg):
    """Attach unit-size flow parameters wherever none are present."""
    for g in mdg.subdomains():
        if "flow" not in mdg.props(g):
            mdg.props(g)["flow"] = FlowParameters(g)
    for ifc in mdg.interfaces:
        if "flow" not in mdg.props(ifc):
            mdg.props(ifc)["flow"] = default_interface_params(mdg, ifc)
    return mdg
