"""Hydraulic stimulation: inject into a fracture, equilibrate slip, dilate.

Each time step: (1) rebuild fracture flow parameters from the current
apertures (cubic-law permeability) and the injection rate, refresh the
aperture-based interface transmissivities, (2) advance pressure one
backward-Euler step, (3) iterate elasticity + friction until no cell slips
(always at least one sweep), (4) convert the step's slip into aperture
change.  Pressure feeds mechanics one way within the step.
"""

from __future__ import annotations

import numpy as np

from ..errors import InnerLoopNotConverged
from ..flow.assemble import step_compressible
from ..flow.fields import PressureField
from ..flow.params import (
    FlowParameters,
    cubic_law_permeability,
    default_interface_params,
    flow_params,
)
from .elasticity import fracture_tractions, matrix_grid, prepare_stencil, solve_elasticity
from .fields import SlipState
from .friction import friction_step, update_aperture


class InjectionSchedule:
    """Piecewise-constant volumetric injection into one fracture cell.

    breakpoints are (time, rate) pairs with strictly increasing times;
    rate(t) holds the last rate at or before t and is 0 before the first
    breakpoint.  The rate is a total source strength for the cell.
    """

    def __init__(self, grid, cell, breakpoints):
        self.grid = grid
        self.cell = int(cell)
        if not 0 <= self.cell < grid.n_cells:
            raise ValueError(f"injection cell {cell} outside grid")
        pts = [(float(t), float(r)) for t, r in breakpoints]
        if not pts:
            raise ValueError("injection schedule needs at least one breakpoint")
        times = np.array([t for t, _ in pts])
        if (np.diff(times) <= 0).any():
            raise ValueError("breakpoint times must be strictly increasing")
        self.times = times
        self.rates = np.array([r for _, r in pts])

    def rate(self, t) -> float:
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return 0.0 if i < 0 else float(self.rates[i])


def stimulate(mdg, mech_params, friction_params, schedule: InjectionSchedule,
              stepper, scheme="tpfa", max_inner=100):
    """Run the injection/slip loop; returns (t, pressure, displacement,
    slip) tuples, one per time step, with the slip state snapshotted after
    the aperture update.

    The pressure step is backward Euler regardless of stepper.scheme; the
    injection rate is evaluated at the end of each step.  Fracture grids
    get fresh FlowParameters each step (aperture = initial + accumulated
    change, cubic-law permeability); all interface transmissivities follow
    the default aperture-based formulas, overriding custom values.
    """
    if max_inner < 1:
        raise ValueError("max_inner must be at least 1")
    matrix_grid(mdg)  # validates the mixed grid shape
    one_d = mdg.subdomains(1)
    if not any(g is schedule.grid for g in one_d):
        raise ValueError("injection grid is not a 1D subdomain of this grid")

    base_aperture = {id(g): flow_params(mdg, g).aperture.copy() for g in one_d}
    slip = SlipState(mdg)
    pressure = PressureField(mdg)
    stencil = prepare_stencil(mdg, mech_params)

    series = []
    for k in range(1, stepper.n_steps + 1):
        t = k * stepper.dt
        for g1 in one_d:
            p1 = flow_params(mdg, g1)
            aperture = base_aperture[id(g1)] + slip.aperture_change_of(g1)
            source = np.zeros(g1.n_cells)
            if g1 is schedule.grid:
                source[schedule.cell] = schedule.rate(t)
            mdg.props(g1)["flow"] = FlowParameters(
                g1,
                permeability=cubic_law_permeability(aperture),
                porosity=p1.porosity,
                aperture=aperture,
                fluid_compressibility=p1.fluid_compressibility,
                source=source,
                bc=p1.bc,
            )
        for ifc in mdg.interfaces:
            mdg.props(ifc)["flow"] = default_interface_params(mdg, ifc)

        pressure = step_compressible(mdg, scheme, stepper.dt, pressure)

        for _ in range(max_inner):
            disp = solve_elasticity(mdg, mech_params, slip, stencil)
            tractions = fracture_tractions(mdg, mech_params, disp, stencil)
            slip, slipped = friction_step(tractions, pressure, friction_params, slip)
            if not slipped:
                break
        else:
            raise InnerLoopNotConverged(
                f"slip still growing after {max_inner} elasticity sweeps "
                f"at t={t:g}"
            )
        update_aperture(slip, friction_params)
        series.append((t, pressure, disp, slip.copy()))
    return series
