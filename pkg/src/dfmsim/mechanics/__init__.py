"""Linear elasticity with frictional fracture slip on slit 2D grids."""

from .elasticity import (
    WallCell,
    fracture_tractions,
    prepare_stencil,
    solve_elasticity,
    wall_layout,
)
from .fields import DisplacementField, FractureTractions, SlipState
from .friction import friction_step, update_aperture
from .mpsa import StressStencil, mpsa_discretize
from .params import (
    ElasticParameters,
    FrictionParameters,
    VectorBoundaryCondition,
    default_slip_relaxation,
    elastic_params,
    lame_from_youngs,
    youngs_from_lame,
)
from .stimulate import InjectionSchedule, stimulate

__all__ = [
    "DisplacementField",
    "ElasticParameters",
    "FractureTractions",
    "FrictionParameters",
    "InjectionSchedule",
    "SlipState",
    "StressStencil",
    "VectorBoundaryCondition",
    "WallCell",
    "default_slip_relaxation",
    "elastic_params",
    "fracture_tractions",
    "friction_step",
    "lame_from_youngs",
    "mpsa_discretize",
    "prepare_stencil",
    "solve_elasticity",
    "stimulate",
    "update_aperture",
    "wall_layout",
]
