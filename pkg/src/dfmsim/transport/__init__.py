"""Advection-conduction heat transport driven by Darcy face fluxes."""

from .fields import TemperatureField
from .params import (
    TransportParameters,
    default_thermal_interface_params,
    ensure_default_transport,
    grid_aperture,
    thermal_interface_params,
    transport_params,
)
from .stepping import (
    CRANK_NICOLSON,
    EXPLICIT_EULER,
    IMPLICIT_EULER,
    SCHEMES,
    TimeStepper,
    TransportSystem,
    assemble_transport,
    run_transport,
    step,
    step_assembled,
)
from .upwind import InterfaceAdvection, interface_advect, upwind_discretize

__all__ = [
    "CRANK_NICOLSON",
    "EXPLICIT_EULER",
    "IMPLICIT_EULER",
    "InterfaceAdvection",
    "SCHEMES",
    "TemperatureField",
    "TimeStepper",
    "TransportParameters",
    "TransportSystem",
    "assemble_transport",
    "default_thermal_interface_params",
    "ensure_default_transport",
    "grid_aperture",
    "interface_advect",
    "run_transport",
    "step",
    "step_assembled",
    "thermal_interface_params",
    "transport_params",
    "upwind_discretize",
]
