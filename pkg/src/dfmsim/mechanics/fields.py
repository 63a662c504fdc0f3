"""Solution containers for elasticity and fracture slip."""

from __future__ import annotations

import numpy as np


class DisplacementField:
    """Cell displacements on the matrix grid plus one 2-vector per fracture
    wall face (the two sides of a slit carry independent wall values)."""

    def __init__(self, grid, cells, wall_faces=None, wall_values=None):
        self.grid = grid
        self.cells = np.asarray(cells, dtype=float).reshape(grid.n_cells, 2)
        if wall_faces is None:
            wall_faces = np.zeros(0, dtype=np.int64)
        if wall_values is None:
            wall_values = np.zeros((len(wall_faces), 2))
        self.wall_faces = np.asarray(wall_faces, dtype=np.int64).reshape(-1)
        self.wall_values = np.asarray(wall_values, dtype=float).reshape(-1, 2)
        if len(self.wall_values) != len(self.wall_faces):
            raise ValueError("one wall value per wall face required")
        self._widx = {int(f): k for k, f in enumerate(self.wall_faces)}

    def wall(self, face) -> np.ndarray:
        """Displacement of one fracture wall face."""
        return self.wall_values[self._widx[int(face)]]

    def copy(self):
        return DisplacementField(
            self.grid, self.cells.copy(), self.wall_faces.copy(),
            self.wall_values.copy(),
        )


class SlipState:
    """Accumulated signed tangential slip and opening per fracture cell.

    Slip only accumulates (reverse slip is out of scope); aperture change is
    fed by the magnitudes of slip increments not yet converted, so that the
    total equals sum(|ds|) * tan(dilation_angle) exactly.
    """

    def __init__(self, mdg):
        self.mdg = mdg
        one_d = mdg.subdomains(1)
        self._slip = {id(g): np.zeros(g.n_cells) for g in one_d}
        self._aperture = {id(g): np.zeros(g.n_cells) for g in one_d}
        self._open = {id(g): np.zeros(g.n_cells, dtype=bool) for g in one_d}
        self._pending = {id(g): np.zeros(g.n_cells) for g in one_d}

    def slip_of(self, grid) -> np.ndarray:
        return self._slip[id(grid)]

    def aperture_change_of(self, grid) -> np.ndarray:
        return self._aperture[id(grid)]

    def open_of(self, grid) -> np.ndarray:
        return self._open[id(grid)]

    def copy(self):
        out = SlipState(self.mdg)
        for src, dst in (
            (self._slip, out._slip),
            (self._aperture, out._aperture),
            (self._open, out._open),
            (self._pending, out._pending),
        ):
            for key, val in src.items():
                dst[key] = val.copy()
        return out


class FractureTractions:
    """Per fracture cell: signed tangential traction tau along the cell
    tangent and compression-positive normal traction sigma_n, both taken
    from the minus-side wall (the sides agree at equilibrium)."""

    def __init__(self, mdg):
        self.mdg = mdg
        one_d = mdg.subdomains(1)
        self._tau = {id(g): np.zeros(g.n_cells) for g in one_d}
        self._normal = {id(g): np.zeros(g.n_cells) for g in one_d}

    def tau_of(self, grid) -> np.ndarray:
        return self._tau[id(grid)]

    def normal_of(self, grid) -> np.ndarray:
        return self._normal[id(grid)]
