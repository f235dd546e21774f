"""Fully-actuated cargo multirotor simulation with ESC-based CoM estimation."""

from ._core import (
    ActuatorCommand,
    DitherConfig,
    VehicleParams,
    Wrench,
    allocate,
    body_wrench,
    composite_com,
    default_config_params,
    dither,
    full_mapping_matrix,
    net_force,
    run_scenario,
    thruster_force_vectors,
    torque_mapping_matrix,
    validate_stability,
)

__all__ = [
    "ActuatorCommand",
    "DitherConfig",
    "VehicleParams",
    "Wrench",
    "allocate",
    "body_wrench",
    "composite_com",
    "default_config_params",
    "dither",
    "full_mapping_matrix",
    "net_force",
    "run_scenario",
    "thruster_force_vectors",
    "torque_mapping_matrix",
    "validate_stability",
]
