"""Solution containers keyed by grid / interface identity."""

from __future__ import annotations

import numpy as np


class CellField:
    """One scalar value per cell of every grid in the mixed grid."""

    def __init__(self, mdg):
        self.mdg = mdg
        self._values = {id(g): np.zeros(g.n_cells) for g in mdg.subdomains()}

    def of(self, grid) -> np.ndarray:
        return self._values[id(grid)]

    def set(self, grid, values):
        v = np.asarray(values, dtype=float)
        if v.shape != (grid.n_cells,):
            raise ValueError(f"expected {grid.n_cells} values, got {v.shape}")
        self._values[id(grid)] = v
        return self

    def vector(self, dof_map) -> np.ndarray:
        x = np.zeros(dof_map.n_dofs)
        for i, g in enumerate(self.mdg.subdomains()):
            x[dof_map.block(i)] = self._values[id(g)]
        return x

    @classmethod
    def from_vector(cls, mdg, dof_map, x):
        field = cls(mdg)
        for i, g in enumerate(mdg.subdomains()):
            field.set(g, x[dof_map.block(i)])
        return field

    def copy(self):
        out = type(self)(self.mdg)
        for key, val in self._values.items():
            out._values[key] = val.copy()
        return out


class PressureField(CellField):
    """Cell pressures across all dimensions."""


class FaceFluxField:
    """Signed face fluxes per grid (along face normals) plus per-pair
    interface fluxes (positive from the higher onto the lower grid)."""

    def __init__(self, mdg):
        self.mdg = mdg
        self._faces = {id(g): np.zeros(g.n_faces) for g in mdg.subdomains()}
        self._iface = {id(i): np.zeros(i.n_pairs) for i in mdg.interfaces}

    def of(self, grid) -> np.ndarray:
        return self._faces[id(grid)]

    def on_interface(self, iface) -> np.ndarray:
        return self._iface[id(iface)]

    def set(self, grid, values):
        self._faces[id(grid)] = np.asarray(values, dtype=float)
        return self

    def set_interface(self, iface, values):
        self._iface[id(iface)] = np.asarray(values, dtype=float)
        return self
