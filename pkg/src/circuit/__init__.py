"""
Circuit module for NLQ-Sim.
Waveplate optics and the two-qubit realization of the protocol step.
"""

from src.circuit.optics import (
    PreparationError,
    hwp,
    invert_preparation,
    is_unitary,
    prepare_state_jones,
    prepare_z,
    qwp,
)
from src.circuit.protocol import (
    U_CNOT,
    U_TILDE,
    QubitState,
    StepOutcome,
    TwoQubitState,
    apply_protocol_step,
    build_cnot_waveplates,
    build_u,
    build_u_decomposed,
    build_u_tilde_waveplates,
    entangled_state,
    product_state,
    run_protocol,
)

__all__ = [
    "hwp",
    "qwp",
    "is_unitary",
    "prepare_z",
    "prepare_state_jones",
    "invert_preparation",
    "PreparationError",
    "QubitState",
    "TwoQubitState",
    "StepOutcome",
    "U_TILDE",
    "U_CNOT",
    "build_u",
    "build_u_decomposed",
    "build_u_tilde_waveplates",
    "build_cnot_waveplates",
    "product_state",
    "entangled_state",
    "apply_protocol_step",
    "run_protocol",
]
