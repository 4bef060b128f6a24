"""Simulator for error-corrected controlled teleportation of a satellite's Bloch-sphere state."""

from .bitflip_code import (
    BlochCoords,
    NoiseReport,
    NoiseSpec,
    SyndromeOutcome,
    diagnose_and_recover,
    encode,
    inject_noise,
    make_input_state,
)
from .gates import (
    Projector,
    hadamard,
    identity,
    pauli_x,
    pauli_y,
    pauli_z,
    phase_global,
    rot_x,
    rot_y,
    rot_z,
    syndrome_projectors,
)
from .protocol import (
    ClassicalMessage,
    ControlCommand,
    CorrectionOp,
    ProtocolTrace,
    apply_control,
    apply_correction,
    assemble,
    bell_pair,
    c3not_stage,
    classify,
    enumerate_leg,
    hadamard_stage,
    processing_stage,
    run_forward,
    run_round_trip,
)
from .statevector import (
    StateVector,
    apply_1q,
    apply_controlled,
    basis_state,
    enumerate_outcomes,
    fidelity,
    measure_projectors,
    measure_qubits,
    tensor,
)

__version__ = "0.1.0"
