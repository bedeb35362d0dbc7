"""LNN synthesis of multi-controlled gates into Clifford+T+Rz circuits."""

from .core import (
    Angle,
    Circuit,
    CostVector,
    DepthVector,
    Gate,
    GateKind,
    McGateSpec,
    McKind,
    SpecError,
    UnitVector,
    cost_of,
    depth_of,
    validate_spec,
)
from .synth import SynthConfig, SynthResult, select_ancilla, synthesize
from .verify import (
    EquivalenceReport,
    check_lnn,
    compare,
    reference_unitary,
    simulate,
)

__all__ = [
    "Angle",
    "Circuit",
    "CostVector",
    "DepthVector",
    "EquivalenceReport",
    "Gate",
    "GateKind",
    "McGateSpec",
    "McKind",
    "SpecError",
    "SynthConfig",
    "SynthResult",
    "UnitVector",
    "check_lnn",
    "compare",
    "cost_of",
    "depth_of",
    "reference_unitary",
    "select_ancilla",
    "simulate",
    "synthesize",
    "validate_spec",
]

__version__ = "0.1.0"
