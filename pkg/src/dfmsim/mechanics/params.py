"""Elastic moduli, vector boundary conditions, and friction constants."""

from __future__ import annotations

import numpy as np

from ..errors import MissingParameters
from ..flow.params import BC_DIRICHLET, BC_NEUMANN, BC_NONE


class VectorBoundaryCondition:
    """Per-face, per-component condition for vector unknowns.

    Components refer to the x/y axes, so axis-aligned rollers (normal
    displacement fixed, tangential traction free) are expressed by setting
    a single component.  Untouched boundary faces are traction-free.
    """

    def __init__(self, grid):
        self.grid = grid
        self.kind = np.full((grid.n_faces, 2), BC_NONE, dtype=np.int8)
        self.value = np.zeros((grid.n_faces, 2))

    def _set(self, faces, values, components, code):
        faces = np.atleast_1d(np.asarray(faces, dtype=int))
        comps = (0, 1) if components is None else np.atleast_1d(components)
        values = np.broadcast_to(
            np.asarray(values, dtype=float), (len(faces), len(np.atleast_1d(comps)))
        )
        for j, comp in enumerate(np.atleast_1d(comps)):
            self.kind[faces, comp] = code
            self.value[faces, comp] = values[:, j]
        return self

    def set_dirichlet(self, faces, values=0.0, components=None):
        return self._set(faces, values, components, BC_DIRICHLET)

    def set_neumann(self, faces, values=0.0, components=None):
        return self._set(faces, values, components, BC_NEUMANN)

    @property
    def any_dirichlet(self) -> bool:
        return bool((self.kind == BC_DIRICHLET).any())


class ElasticParameters:
    """Lame parameters, body force, and displacement/traction conditions."""

    def __init__(self, grid, mu=1.0, lam=1.0, body_force=0.0, bc=None):
        n = grid.n_cells
        self.mu = np.broadcast_to(np.asarray(mu, dtype=float), (n,)).copy()
        self.lam = np.broadcast_to(np.asarray(lam, dtype=float), (n,)).copy()
        self.body_force = np.broadcast_to(
            np.asarray(body_force, dtype=float), (n, 2)
        ).copy()
        self.bc = bc if bc is not None else VectorBoundaryCondition(grid)
        if (self.mu <= 0).any():
            raise ValueError("shear modulus must be positive")
        if (self.lam <= -2.0 / 3.0 * self.mu).any():
            raise ValueError("lambda must exceed -2*mu/3")


class FrictionParameters:
    """Coulomb friction with constant dilation and excess-traction relaxation."""

    def __init__(self, friction_coefficient, dilation_angle=0.0,
                 slip_relaxation=1.0, slip_tolerance=0.0):
        self.friction_coefficient = float(friction_coefficient)
        self.dilation_angle = float(dilation_angle)
        self.slip_relaxation = float(slip_relaxation)
        self.slip_tolerance = float(slip_tolerance)
        if self.friction_coefficient <= 0:
            raise ValueError("friction coefficient must be positive")
        if self.dilation_angle < 0:
            raise ValueError("dilation angle must be nonnegative")
        if self.slip_relaxation <= 0:
            raise ValueError("slip relaxation must be positive")
        if self.slip_tolerance < 0:
            raise ValueError("slip tolerance must be nonnegative")


def lame_from_youngs(youngs, poisson):
    """(E, nu) -> (mu, lam), plane-strain convention."""
    youngs = np.asarray(youngs, dtype=float)
    poisson = np.asarray(poisson, dtype=float)
    if (youngs <= 0).any():
        raise ValueError("Young's modulus must be positive")
    if (poisson <= -1).any() or (poisson >= 0.5).any():
        raise ValueError("Poisson ratio must lie in (-1, 0.5)")
    mu = youngs / (2.0 * (1.0 + poisson))
    lam = youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson))
    return mu, lam


def youngs_from_lame(mu, lam):
    """(mu, lam) -> (E, nu), inverse of lame_from_youngs."""
    mu = np.asarray(mu, dtype=float)
    lam = np.asarray(lam, dtype=float)
    youngs = mu * (3.0 * lam + 2.0 * mu) / (lam + mu)
    poisson = lam / (2.0 * (lam + mu))
    return youngs, poisson


def default_slip_relaxation(grid, params) -> float:
    """Compliance scale h/(2 mu): one cell layer of shear per unit traction."""
    h = float(np.mean(np.sqrt(grid.cell_volumes)))
    return h / (2.0 * float(np.mean(params.mu)))


def elastic_params(mdg, grid) -> ElasticParameters:
    p = mdg.props(grid).get("mechanics")
    if p is None:
        raise MissingParameters(
            f"no elastic parameters attached to dim-{grid.dim} grid"
        )
    return p
