"""Interface flux law between grids one dimension apart.

Per interface pair the exchange flux is

    q_pair = C * (trace_p - lower_p),    C = K_n * measure,

with trace_p the higher-dimensional pressure extrapolated to the slit face.
In the assembled system the trace is eliminated with the slit face's own
half-transmissibility, which yields the harmonic two-point hybrid

    q_pair = (alpha * C) / (alpha + C) * (p_higher_cell - p_lower_cell).

Measures: matrix-fracture pairs use the slit-face length; fracture-point
pairs use the product of the two apertures meeting at the point.
"""

from __future__ import annotations

import numpy as np


class CouplingStencil:
    def __init__(self, iface, conductance):
        self.iface = iface
        self.conductance = np.asarray(conductance, dtype=float)

    def flux(self, trace_p, lower_p):
        """Exchange flux per pair, positive from higher onto lower."""
        return self.conductance * (np.asarray(trace_p) - np.asarray(lower_p))


def interface_measures(iface, params_hi=None, params_lo=None):
    hi = iface.higher
    faces = iface.pairs[:, 0]
    if hi.dim == 2:
        return hi.face_areas[faces].astype(float)
    cells_hi = hi.face_cells[faces, 0]
    a_hi = params_hi.aperture[cells_hi] if params_hi is not None else 1.0
    a_lo = params_lo.aperture[iface.pairs[:, 1]] if params_lo is not None else 1.0
    return a_hi * a_lo * np.ones(iface.n_pairs)


def couple_interface(iface, iparams, params_hi=None, params_lo=None) -> CouplingStencil:
    measure = interface_measures(iface, params_hi, params_lo)
    return CouplingStencil(iface, iparams.normal_transmissivity * measure)


def hybrid_transmissibility(coupling, stencil_hi):
    """Eliminate the trace pressure: harmonic mean of the slit-face
    half-transmissibility and the interface conductance, per pair.
    A vanishing half-transmissibility (zero conductivity) blocks exchange."""
    faces = coupling.iface.pairs[:, 0]
    alpha = stencil_hi.half_trans[faces]
    c = coupling.conductance
    if (alpha < 0).any():
        bad = faces[alpha < 0][0]
        raise ValueError(f"slit face {bad} has negative half-transmissibility")
    denom = alpha + c
    return np.where(denom > 0, alpha * c / np.where(denom > 0, denom, 1.0), 0.0)
