"""Single-phase Darcy flow on mixed-dimensional grids."""

from .assemble import (
    accumulation_coefficients,
    assemble_global,
    reconstruct_fluxes,
    solve_incompressible,
    step_compressible,
)
from .coupling import CouplingStencil, couple_interface, interface_measures
from .fields import FaceFluxField, PressureField
from .mpfa import mpfa_discretize
from .params import (
    BC_DIRICHLET,
    BC_NEUMANN,
    BoundaryCondition,
    FlowParameters,
    InterfaceParameters,
    cubic_law_permeability,
    default_interface_params,
    ensure_default_params,
    flow_params,
    interface_params,
)
from .tpfa import FluxStencil, tpfa_discretize

__all__ = [
    "BC_DIRICHLET",
    "BC_NEUMANN",
    "BoundaryCondition",
    "CouplingStencil",
    "FaceFluxField",
    "FlowParameters",
    "FluxStencil",
    "InterfaceParameters",
    "PressureField",
    "accumulation_coefficients",
    "assemble_global",
    "couple_interface",
    "cubic_law_permeability",
    "default_interface_params",
    "ensure_default_params",
    "flow_params",
    "interface_measures",
    "interface_params",
    "mpfa_discretize",
    "reconstruct_fluxes",
    "solve_incompressible",
    "step_compressible",
    "tpfa_discretize",
]
