"""Global assembly and drivers for mixed-dimensional Darcy flow.

One pressure unknown per cell of every grid; rows are cell mass balances.
Dof ordering: grids by descending dimension, insertion order within a
dimension, cell index within a grid (restart files depend on this).
"""

from __future__ import annotations

import numpy as np

from ..errors import SingularSystem
from ..linalg import DofMap, SparseSystem, solve
from .coupling import couple_interface, hybrid_transmissibility
from .fields import FaceFluxField, PressureField
from .mpfa import mpfa_discretize
from .params import flow_params, interface_params
from .tpfa import tpfa_discretize

SCHEMES = ("tpfa", "mpfa")


def _discretize(mdg, scheme):
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")
    op = tpfa_discretize if scheme == "tpfa" else mpfa_discretize
    return {id(g): op(g, flow_params(mdg, g)) for g in mdg.subdomains()}


def _couple(mdg, stencils):
    out = []
    for ifc in mdg.interfaces:
        cpl = couple_interface(
            ifc,
            interface_params(mdg, ifc),
            flow_params(mdg, ifc.higher),
            flow_params(mdg, ifc.lower),
        )
        out.append((ifc, cpl, hybrid_transmissibility(cpl, stencils[id(ifc.higher)])))
    return out


def _dof_map(mdg):
    return DofMap([(i, g.n_cells, 1) for i, g in enumerate(mdg.subdomains())])


def assemble_global(mdg, scheme="tpfa", stencils=None):
    """Steady incompressible system; marks a pure-Neumann constant null space.

    Returns a SparseSystem with the dof map attached and the extra attribute
    ``pure_neumann`` set when no Dirichlet face exists anywhere.
    """
    stencils = stencils if stencils is not None else _discretize(mdg, scheme)
    dofs = _dof_map(mdg)
    grids = list(mdg.subdomains())
    offset = {id(g): dofs.block(i).start for i, g in enumerate(grids)}

    rows, cols, vals = [], [], []
    rhs = np.zeros(dofs.n_dofs)
    any_dirichlet = False

    for g in grids:
        params = flow_params(mdg, g)
        any_dirichlet = any_dirichlet or params.bc.any_dirichlet
        base = offset[id(g)]
        st = stencils[id(g)]
        fc = g.face_cells
        for f, c, t in zip(st.rows, st.cols, st.vals):
            for side, sign in ((0, 1.0), (1, -1.0)):
                cell = fc[f, side]
                if cell >= 0:
                    rows.append(base + cell)
                    cols.append(base + c)
                    vals.append(sign * t)
        for f in np.flatnonzero(st.bound):
            for side, sign in ((0, 1.0), (1, -1.0)):
                cell = fc[f, side]
                if cell >= 0:
                    rhs[base + cell] -= sign * st.bound[f]
        rhs[base : base + g.n_cells] += params.source

    for ifc, _cpl, lam in _couple(mdg, stencils):
        hi_base = offset[id(ifc.higher)]
        lo_base = offset[id(ifc.lower)]
        fc_hi = ifc.higher.face_cells
        for k in range(ifc.n_pairs):
            ch = hi_base + fc_hi[ifc.pairs[k, 0], 0]
            cl = lo_base + ifc.pairs[k, 1]
            lk = lam[k]
            rows += [ch, ch, cl, cl]
            cols += [ch, cl, ch, cl]
            vals += [lk, -lk, -lk, lk]

    # Explicit (possibly zero) diagonal on every row keeps the pattern valid
    # for ILU(0) and for time-stepping accumulation shifts.
    rows += range(dofs.n_dofs)
    cols += range(dofs.n_dofs)
    vals += [0.0] * dofs.n_dofs

    sys = SparseSystem.from_triplets(
        dofs.n_dofs, rows, cols, vals, rhs, dof_map=dofs
    )
    sys.pure_neumann = not any_dirichlet
    return sys


def _pin_compatible_neumann(system):
    """A pure-Neumann system is solvable only for balanced data; pin one
    pressure to zero to remove the constant null space."""
    scale = max(np.abs(system.data).max(), 1.0)
    total = abs(system.rhs.sum())
    if total > 1e-10 * max(np.abs(system.rhs).max(), 1.0) * system.n:
        raise SingularSystem(
            f"pure-Neumann data incompatible: net source imbalance {total:.3e}"
        )
    data = system.data.copy()
    for p in range(system.indptr[0], system.indptr[1]):
        if system.indices[p] == 0:
            data[p] += scale
    return SparseSystem(system.indptr, system.indices, data, system.rhs,
                        dof_map=system.dof_map, validate=False)


def reconstruct_fluxes(mdg, pressure, scheme="tpfa", stencils=None) -> FaceFluxField:
    """Face fluxes from a pressure field; slit faces carry the interface flux."""
    stencils = stencils if stencils is not None else _discretize(mdg, scheme)
    flux = FaceFluxField(mdg)
    for g in mdg.subdomains():
        flux.set(g, stencils[id(g)].face_fluxes(pressure.of(g)))
    for ifc, _cpl, lam in _couple(mdg, stencils):
        p_hi = pressure.of(ifc.higher)
        p_lo = pressure.of(ifc.lower)
        faces = ifc.pairs[:, 0]
        cells_hi = ifc.higher.face_cells[faces, 0]
        q = lam * (p_hi[cells_hi] - p_lo[ifc.pairs[:, 1]])
        flux.set_interface(ifc, q)
        flux.of(ifc.higher)[faces] = q
    return flux


def solve_incompressible(mdg, scheme="tpfa"):
    stencils = _discretize(mdg, scheme)
    system = assemble_global(mdg, scheme, stencils=stencils)
    if system.pure_neumann:
        system = _pin_compatible_neumann(system)
    x = solve(system, hint=scheme)
    pressure = PressureField.from_vector(mdg, system.dof_map, x)
    return pressure, reconstruct_fluxes(mdg, pressure, scheme, stencils=stencils)


def accumulation_coefficients(mdg):
    """Physical pore compressibility V_phys * porosity * c_f per cell,
    stacked in dof order.  V_phys scales grid volume by aperture^(2-dim)."""
    parts = []
    for g in mdg.subdomains():
        p = flow_params(mdg, g)
        parts.append(g.cell_volumes * p.specific_volume(g) * p.porosity
                     * p.fluid_compressibility)
    return np.concatenate(parts) if parts else np.zeros(0)


def step_compressible(mdg, scheme, dt, state: PressureField) -> PressureField:
    """One backward-Euler step of slightly compressible flow."""
    if dt <= 0:
        raise ValueError(f"time step must be positive, got {dt}")
    stencils = _discretize(mdg, scheme)
    system = assemble_global(mdg, scheme, stencils=stencils)
    acc = accumulation_coefficients(mdg) / dt
    p_old = state.vector(system.dof_map)

    if system.pure_neumann and not (acc > 0).any():
        raise SingularSystem(
            "no Dirichlet face and zero accumulation: pressure level undetermined"
        )
    data = system.data.copy()
    rhs = system.rhs + acc * p_old
    for i in range(system.n):
        for ptr in range(system.indptr[i], system.indptr[i + 1]):
            if system.indices[ptr] == i:
                data[ptr] += acc[i]
                break
    stepped = SparseSystem(system.indptr, system.indices, data, rhs,
                           dof_map=system.dof_map, validate=False)
    x = solve(stepped, hint=scheme)
    return PressureField.from_vector(mdg, system.dof_map, x)
