"""Coulomb friction with pressure-weakened normal stress and dilation."""

from __future__ import annotations

import numpy as np

from ..flow.fields import CellField
from .fields import FractureTractions, SlipState
from .params import FrictionParameters


def friction_step(tractions: FractureTractions, pressure, params: FrictionParameters,
                  state: SlipState):
    """One slip-relaxation sweep; returns (new state, any cell slipped).

    Effective normal stress sigma_n - p (compression positive) sets the
    Coulomb resistance mu_f * max(sigma'_n, 0); cells at or past opening
    (sigma'_n <= 0) are flagged open and offer no shear resistance, so the
    sweep drives their shear traction to zero.  Slip increments are
    gamma * excess * sign(tau), added to the accumulated slip.
    """
    out = state.copy()
    slipped = False
    for g1 in tractions.mdg.subdomains(1):
        tau = tractions.tau_of(g1)
        eff = tractions.normal_of(g1) - pressure.of(g1)
        resistance = params.friction_coefficient * np.maximum(eff, 0.0)
        excess = np.abs(tau) - resistance
        ds = np.where(
            excess > params.slip_tolerance,
            params.slip_relaxation * excess * np.sign(tau),
            0.0,
        )
        out.slip_of(g1)[:] += ds
        out._pending[id(g1)] += np.abs(ds)
        out.open_of(g1)[:] = eff <= 0.0
        slipped = slipped or bool((ds != 0.0).any())
    return out, slipped


def update_aperture(state: SlipState, params: FrictionParameters) -> CellField:
    """Convert slip accumulated since the last call into aperture change.

    Returns the per-cell increments; state.aperture_change_of grows by
    |slip increments| * tan(dilation_angle), keeping the dilation identity
    exact under repeated slip of either sign.
    """
    tan_psi = np.tan(params.dilation_angle)
    increments = CellField(state.mdg)
    for g1 in state.mdg.subdomains(1):
        inc = state._pending[id(g1)] * tan_psi
        state.aperture_change_of(g1)[:] += inc
        state._pending[id(g1)][:] = 0.0
        increments.set(g1, inc)
    return increments
