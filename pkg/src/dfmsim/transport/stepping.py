"""Time stepping for advection-conduction heat transport.

The spatial operator is assembled once per flux field: per-grid upwind
advection and TPFA/MPFA conduction, plus upwinded advective exchange and
two-point conductive exchange across every interface.  Crank-Nicolson is
implemented as the average of the explicit and implicit updates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CflViolation
from ..flow.assemble import _dof_map
from ..flow.coupling import couple_interface, hybrid_transmissibility
from ..flow.mpfa import mpfa_discretize
from ..flow.tpfa import tpfa_discretize
from ..linalg import SparseSystem, solve
from .fields import TemperatureField
from .params import grid_aperture, thermal_interface_params, transport_params
from .upwind import interface_advect, upwind_discretize

EXPLICIT_EULER = "explicit-euler"
IMPLICIT_EULER = "implicit-euler"
CRANK_NICOLSON = "crank-nicolson"
SCHEMES = (EXPLICIT_EULER, IMPLICIT_EULER, CRANK_NICOLSON)


@dataclass(frozen=True)
class TimeStepper:
    scheme: str
    dt: float
    t_end: float

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme {self.scheme!r} not one of {SCHEMES}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < self.dt:
            raise ValueError(f"t_end {self.t_end} shorter than one step {self.dt}")

    @property
    def n_steps(self):
        return int(np.ceil(self.t_end / self.dt - 1e-12))


class TransportSystem:
    """Assembled spatial operator: cell balance = (A T - b), plus the
    accumulation vector and the explicit stability limit."""

    def __init__(self, mdg, dof_map, rows, cols, vals, b, acc):
        self.mdg = mdg
        self.dof_map = dof_map
        n = dof_map.n_dofs
        self.n = n
        self.system = SparseSystem.from_triplets(n, rows, cols, vals, b, dof_map)
        self.acc = acc
        diag = self.system.diagonal()
        with np.errstate(divide="ignore"):
            limits = np.where(diag > 0, acc / np.maximum(diag, 1e-300), np.inf)
        self.cfl_dt = 0.9 * float(limits.min()) if n else np.inf

    def apply(self, t_vec):
        return self.system.matvec(t_vec)

    @property
    def b(self):
        return self.system.rhs


@dataclass
class _ConductionParams:
    """Just what the flux discretizations read; conductivity may be
    semi-definite, which plain FlowParameters would reject."""

    permeability: np.ndarray
    aperture: np.ndarray
    bc: object


def _conduction_params(mdg, g, tp):
    return _ConductionParams(tp.conductivity_eff, grid_aperture(mdg, g), tp.bc)


def assemble_transport(mdg, flux, conduction_scheme="tpfa") -> TransportSystem:
    dofs = _dof_map(mdg)
    grids = list(mdg.subdomains())
    offset = {id(g): dofs.block(i).start for i, g in enumerate(grids)}
    disc = tpfa_discretize if conduction_scheme == "tpfa" else mpfa_discretize

    rows, cols, vals = [], [], []
    b = np.zeros(dofs.n_dofs)
    acc = np.zeros(dofs.n_dofs)
    cond_stencils = {}

    skip = {id(g): set() for g in grids}
    for ifc in mdg.interfaces:
        skip[id(ifc.higher)].update(int(f) for f in ifc.pairs[:, 0])

    for g in grids:
        tp = transport_params(mdg, g)
        base = offset[id(g)]
        acc[base : base + g.n_cells] = (
            tp.heat_capacity_eff * g.cell_volumes * grid_aperture(mdg, g) ** (2 - g.dim)
        )
        b[base : base + g.n_cells] += tp.source

        cond = disc(g, _conduction_params(mdg, g, tp))
        cond_stencils[id(g)] = cond
        adv = upwind_discretize(g, flux.of(g), bc=tp.bc, skip_faces=skip[id(g)])

        for st, scale in ((cond, 1.0), (adv, tp.heat_capacity_fluid)):
            fc = g.face_cells
            for f, c, t in zip(st.rows, st.cols, st.vals):
                for side, sign in ((0, 1.0), (1, -1.0)):
                    cell = fc[f, side]
                    if cell >= 0:
                        rows.append(base + cell)
                        cols.append(base + c)
                        vals.append(sign * scale * t)
            for f in np.flatnonzero(st.bound):
                for side, sign in ((0, 1.0), (1, -1.0)):
                    cell = fc[f, side]
                    if cell >= 0:
                        b[base + cell] -= sign * scale * st.bound[f]

    for ifc in mdg.interfaces:
        hi, lo = ifc.higher, ifc.lower
        hi_base, lo_base = offset[id(hi)], offset[id(lo)]
        cpl = couple_interface(
            ifc,
            thermal_interface_params(mdg, ifc),
            mdg.props(hi).get("flow"),
            mdg.props(lo).get("flow"),
        )
        lam = hybrid_transmissibility(cpl, cond_stencils[id(hi)])
        rc_f = transport_params(mdg, lo).heat_capacity_fluid
        adv = interface_advect(ifc, flux.on_interface(ifc))
        fc_hi = hi.face_cells
        for k in range(ifc.n_pairs):
            ch = hi_base + fc_hi[ifc.pairs[k, 0], 0]
            cl = lo_base + ifc.pairs[k, 1]
            lk = lam[k]
            rows += [ch, ch, cl, cl]
            cols += [ch, cl, ch, cl]
            vals += [lk, -lk, -lk, lk]
            q = rc_f * adv.flux[k]
            if q > 0:
                rows += [ch, cl]
                cols += [ch, ch]
                vals += [q, -q]
            elif q < 0:
                rows += [ch, cl]
                cols += [cl, cl]
                vals += [q, -q]

    rows += range(dofs.n_dofs)
    cols += range(dofs.n_dofs)
    vals += [0.0] * dofs.n_dofs
    return TransportSystem(mdg, dofs, rows, cols, vals, b, acc)


def _explicit_update(ts, dt, t_vec, enforce_cfl=True):
    if enforce_cfl and dt > ts.cfl_dt * (1 + 1e-12):
        raise CflViolation(f"dt={dt} exceeds explicit stability limit {ts.cfl_dt}")
    return t_vec - dt * (ts.apply(t_vec) - ts.b) / ts.acc


def _implicit_update(ts, dt, t_vec):
    sys0 = ts.system
    data = sys0.data.copy()
    for i in range(ts.n):
        for p in range(sys0.indptr[i], sys0.indptr[i + 1]):
            if sys0.indices[p] == i:
                data[p] += ts.acc[i] / dt
                break
    stepped = SparseSystem(sys0.indptr, sys0.indices, data,
                           ts.acc / dt * t_vec + ts.b,
                           dof_map=ts.dof_map, validate=False)
    return solve(stepped, hint="upwind")


def step_assembled(ts: TransportSystem, stepper: TimeStepper, state,
                   enforce_cfl=True) -> TemperatureField:
    """enforce_cfl=False permits stepping exactly at the stability boundary
    (e.g. the unit-Courant pure-advection shift); the default guards with
    the 0.9 safety factor."""
    t_vec = state.vector(ts.dof_map)
    if stepper.scheme == EXPLICIT_EULER:
        out = _explicit_update(ts, stepper.dt, t_vec, enforce_cfl)
    elif stepper.scheme == IMPLICIT_EULER:
        out = _implicit_update(ts, stepper.dt, t_vec)
    else:
        out = 0.5 * (
            _explicit_update(ts, stepper.dt, t_vec, enforce_cfl)
            + _implicit_update(ts, stepper.dt, t_vec)
        )
    return TemperatureField.from_vector(ts.mdg, ts.dof_map, out)


def step(mdg, stepper: TimeStepper, state, flux, conduction_scheme="tpfa",
         enforce_cfl=True):
    """One time step of the advection-conduction equation."""
    ts = assemble_transport(mdg, flux, conduction_scheme)
    return step_assembled(ts, stepper, state, enforce_cfl)


def run_transport(mdg, stepper: TimeStepper, flux, state0=None,
                  conduction_scheme="tpfa", output_every=1, on_state=None):
    """March to t_end, emitting (time, state) snapshots.

    Returns the list of snapshots; the initial state and the final state are
    always included.  on_state(t, state) fires for every accepted step.
    """
    ts = assemble_transport(mdg, flux, conduction_scheme)
    state = state0.copy() if state0 is not None else TemperatureField(mdg)
    series = [(0.0, state)]
    for k in range(1, stepper.n_steps + 1):
        state = step_assembled(ts, stepper, state)
        t = k * stepper.dt
        if on_state is not None:
            on_state(t, state)
        if k % output_every == 0 or k == stepper.n_steps:
            series.append((t, state))
    return series
