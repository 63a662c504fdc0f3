"""Heat transport parameters.

Effective (porosity-weighted) capacities and conductivities are per cell;
the fluid capacity is a single constant per grid.  Apertures are read from
the attached flow parameters so both physics see the same geometry.
"""

from __future__ import annotations

import numpy as np

from ..errors import MissingParameters
from ..flow.params import BoundaryCondition, InterfaceParameters, _as_tensor_field


class TransportParameters:
    def __init__(self, grid, heat_capacity_eff=1.0, heat_capacity_fluid=1.0,
                 conductivity_eff=1.0, source=0.0, bc=None):
        n = grid.n_cells
        self.heat_capacity_eff = np.broadcast_to(
            np.asarray(heat_capacity_eff, dtype=float), (n,)
        ).copy()
        self.heat_capacity_fluid = float(heat_capacity_fluid)
        self.conductivity_eff = _as_tensor_field(grid, conductivity_eff, allow_zero=True)
        self.source = np.broadcast_to(np.asarray(source, dtype=float), (n,)).copy()
        self.bc = bc if bc is not None else BoundaryCondition(grid)
        if (self.heat_capacity_eff <= 0).any():
            raise ValueError("effective heat capacity must be positive")
        if self.heat_capacity_fluid <= 0:
            raise ValueError("fluid heat capacity must be positive")


def transport_params(mdg, grid) -> TransportParameters:
    p = mdg.props(grid).get("transport")
    if p is None:
        raise MissingParameters(
            f"no transport parameters attached to dim-{grid.dim} grid"
        )
    return p


def grid_aperture(mdg, grid):
    """Aperture from the flow parameters when attached, unit otherwise."""
    flow = mdg.props(grid).get("flow")
    if flow is not None:
        return flow.aperture
    return np.ones(grid.n_cells)


def default_thermal_interface_params(mdg, iface) -> InterfaceParameters:
    """Thermal counterpart of the flow default: c_n = 2 x conductivity / a."""
    lo, hi = iface.lower, iface.higher
    if hi.dim == 2:
        p_lo = transport_params(mdg, lo)
        cells = iface.pairs[:, 1]
        cn = 2.0 * p_lo.conductivity_eff[cells] / grid_aperture(mdg, lo)[cells]
    else:
        p_hi = transport_params(mdg, hi)
        faces = iface.pairs[:, 0]
        cells_hi = hi.face_cells[faces, 0]
        a0 = grid_aperture(mdg, lo)[iface.pairs[:, 1]]
        cn = 2.0 * p_hi.conductivity_eff[cells_hi] / (a0 * a0)
    return InterfaceParameters(iface, cn, allow_zero=True)


def thermal_interface_params(mdg, iface) -> InterfaceParameters:
    p = mdg.props(iface).get("transport")
    if p is None:
        raise MissingParameters(f"no thermal interface parameters on {iface!r}")
    return p


def ensure_default_transport(mdg):
    """Attach unit-size transport parameters wherever none are present."""
    for g in mdg.subdomains():
        if "transport" not in mdg.props(g):
            mdg.props(g)["transport"] = TransportParameters(g)
    for ifc in mdg.interfaces:
        if "transport" not in mdg.props(ifc):
            mdg.props(ifc)["transport"] = default_thermal_interface_params(mdg, ifc)
    return mdg
