"""zonec: compiler and execution-cost simulator for zoned atom-array machines."""

__version__ = "0.1.0"

from .arch import MachineConfig, Policy, build_layout
from .cost import breakdown, fidelity
from .ir import Circuit, Gate, GateKind, PauliTerm, Zone
from .rewrite import PipelineOptions, ZoneStepProgram, mantra_pipeline
from .scheduler import Timeline, count_ld_st, schedule

__all__ = [
    "Circuit",
    "Gate",
    "GateKind",
    "MachineConfig",
    "PauliTerm",
    "PipelineOptions",
    "Policy",
    "Timeline",
    "Zone",
    "ZoneStepProgram",
    "breakdown",
    "build_layout",
    "count_ld_st",
    "fidelity",
    "mantra_pipeline",
    "schedule",
    "__version__",
]
