"""Steady-state phasor simulation of damaged transmission lines as lumped RLGC ladders."""

from .analytic import (
    REFERENCE_LINE,
    AnalyticConstants,
    BoundaryCondition,
    LineParams,
    LineProfile,
    analytic_profile,
    characteristic_impedance,
    propagation_constant,
    reflection_coefficient,
    time_domain_sample,
)
from .errors import (
    InvalidParameterError,
    LadderError,
    SingularConfigurationError,
    SingularNetworkError,
    UnsupportedConfigurationError,
)
from .ladder import (
    ComponentId,
    ComponentKind,
    DamageCase,
    GenerationConstants,
    NetworkSpec,
    NodeResponse,
    ReceiverVoltage,
    TransmitterVoltageMagnitude,
    UndamagedConstants,
    frequency_response,
    generation_constants,
    node_phasors,
    partition,
    series_branch,
    simulate,
    step_gain,
    step_impedance,
    undamaged_constants,
)

__version__ = "0.1.0"

__all__ = [
    "REFERENCE_LINE",
    "AnalyticConstants",
    "BoundaryCondition",
    "ComponentId",
    "ComponentKind",
    "DamageCase",
    "GenerationConstants",
    "InvalidParameterError",
    "LadderError",
    "LineParams",
    "LineProfile",
    "NetworkSpec",
    "NodeResponse",
    "ReceiverVoltage",
    "SingularConfigurationError",
    "SingularNetworkError",
    "TransmitterVoltageMagnitude",
    "UndamagedConstants",
    "UnsupportedConfigurationError",
    "analytic_profile",
    "characteristic_impedance",
    "frequency_response",
    "generation_constants",
    "node_phasors",
    "partition",
    "propagation_constant",
    "reflection_coefficient",
    "series_branch",
    "simulate",
    "step_gain",
    "step_impedance",
    "time_domain_sample",
    "undamaged_constants",
]
