"""Controlled error-corrected teleportation between a satellite and a ground operator.

One *leg* moves a single qubit from a sender to a receiver:

    encode -> [noise + syndrome recovery @ after_encode]
    -> join with |b00> -> C3NOT(0,1,2 -> 3)
    -> [noise + syndrome recovery @ after_c3not]
    -> H on qubits 0,1,2 -> measure qubits 0..3 -> Z^z X^x on qubit 4

Noise and recovery always sit at the same point of the circuit and always
before the Hadamards; outside the code space the three-control NOT would
not fire, so a flip left uncorrected across it cannot be repaired later.

The forward leg carries the satellite's orientation qubit to the operator,
who may rotate it and send the result back over an identical return leg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import gates
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
from .statevector import (
    StateVector,
    apply_1q,
    apply_controlled,
    basis_state,
    enumerate_outcomes,
    fidelity,
    measure_qubits,
    tensor,
)

MESSAGE_QUBITS = (0, 1, 2, 3)
AXES = ("x", "y", "z", "global_phase")


@dataclass(frozen=True)
class ClassicalMessage:
    """The four measured bits of qubits 0..3, in channel order."""

    bits: Tuple[int, int, int, int]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != 4 or set(bits) - {0, 1}:
            raise ValueError(f"a message is exactly four bits, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, s: str) -> "ClassicalMessage":
        return cls(tuple(int(c) for c in s))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class CorrectionOp:
    x_exp: int
    z_exp: int

    def __str__(self) -> str:
        return f"Z^{self.z_exp}X^{self.x_exp}"


@dataclass(frozen=True)
class ControlCommand:
    """Ordered ``(axis, angle)`` steps; axis is one of x, y, z, global_phase."""

    steps: Tuple[Tuple[str, float], ...] = ()

    def __post_init__(self):
        steps = tuple((str(a), float(t)) for a, t in self.steps)
        for axis, angle in steps:
            if axis not in AXES:
                raise ValueError(f"unknown rotation axis {axis!r}")
            if not math.isfinite(angle):
                raise ValueError(f"rotation angle for {axis} must be finite")
        object.__setattr__(self, "steps", steps)


@dataclass
class LegRecord:
    """Everything one teleportation leg did, stage by stage."""

    psi_in: StateVector
    encoded: StateVector
    assembled: StateVector
    entangled: StateVector
    transformed: StateVector
    noise_report: NoiseReport
    noisy: StateVector
    recovered: StateVector
    syndrome: SyndromeOutcome
    message: ClassicalMessage
    message_prob: float
    correction: CorrectionOp
    residual: StateVector
    output: StateVector


@dataclass
class ProtocolTrace:
    coords_in: BlochCoords
    forward: LegRecord
    fidelity_operator: float
    psi6: Optional[StateVector] = None
    command: ControlCommand = field(default_factory=ControlCommand)
    processing_state: Optional[StateVector] = None
    return_leg: Optional[LegRecord] = None
    fidelity_satellite: Optional[float] = None

    psi0 = property(lambda self: self.forward.psi_in)
    psi1 = property(lambda self: self.forward.encoded)
    psi2 = property(lambda self: self.forward.assembled)
    psi3 = property(lambda self: self.forward.entangled)
    psi4 = property(lambda self: self.forward.transformed)
    psi5 = property(lambda self: self.forward.output)
    noise_report = property(lambda self: self.forward.noise_report)
    syndrome = property(lambda self: self.forward.syndrome)
    message = property(lambda self: self.forward.message)
    correction = property(lambda self: self.forward.correction)

    @property
    def return_message(self) -> Optional[ClassicalMessage]:
        return None if self.return_leg is None else self.return_leg.message


@dataclass(frozen=True)
class Branch:
    message: ClassicalMessage
    prob: float
    residual: StateVector
    correction: CorrectionOp
    corrected: StateVector
    fidelity: float


def bell_pair() -> StateVector:
    return StateVector.from_kets({"00": 1, "11": 1}, normalize=True)


def _require(state: StateVector, n: int, what: str) -> None:
    if state.num_qubits != n:
        raise ValueError(f"{what} expects {n} qubits, got {state.num_qubits}")


def assemble(encoded: StateVector, epr: StateVector) -> StateVector:
    _require(encoded, 3, "assemble (encoded block)")
    _require(epr, 2, "assemble (EPR pair)")
    return tensor(encoded, epr)


def c3not_stage(state: StateVector) -> StateVector:
    _require(state, 5, "c3not_stage")
    return apply_controlled(state, {0, 1, 2}, 3, gates.pauli_x())


def hadamard_stage(state: StateVector) -> StateVector:
    _require(state, 5, "hadamard_stage")
    h = gates.hadamard()
    for q in (0, 1, 2):
        state = apply_1q(state, h, q)
    return state


def classify(message: ClassicalMessage) -> CorrectionOp:
    m0, m1, m2, m3 = message.bits
    return CorrectionOp(x_exp=m3, z_exp=m0 ^ m1 ^ m2)


def apply_correction(residual: StateVector, op: CorrectionOp) -> StateVector:
    """Z^z X^x: X first, then Z."""
    _require(residual, 1, "apply_correction")
    if op.x_exp:
        residual = apply_1q(residual, gates.pauli_x(), 0)
    if op.z_exp:
        residual = apply_1q(residual, gates.pauli_z(), 0)
    return residual


def processing_stage(deciphered: StateVector) -> StateVector:
    """Toffoli(0, 1 -> 2) on deciphered (x) |1> (x) |0>.

    For a superposed input the data qubit ends up entangled with the target
    ancilla: a|0> + b|1>  ->  a|010> + b|111>.
    """
    _require(deciphered, 1, "processing_stage")
    psi = tensor(deciphered, basis_state(2, "10"))
    return apply_controlled(psi, {0, 1}, 2, gates.pauli_x())


def apply_control(psi: StateVector, cmd: ControlCommand | Sequence) -> StateVector:
    if not isinstance(cmd, ControlCommand):
        cmd = ControlCommand(tuple(cmd))
    _require(psi, 1, "apply_control")
    for axis, angle in cmd.steps:
        psi = apply_1q(psi, gates.ROTATIONS[axis](angle), 0)
    return psi


def _protect(block, spec, placement, rng):
    """Inject noise and run syndrome recovery if ``placement`` is the noise point."""
    if spec.placement != placement:
        return None
    noisy, report = inject_noise(block, spec, rng)
    recovered, syndrome = diagnose_and_recover(noisy, rng)
    return noisy, report, recovered, syndrome


def _pre_measurement(psi: StateVector, noise: NoiseSpec, rng):
    """Run a leg up to (and including) the Hadamard stage."""
    encoded = encode(psi)
    block = encoded
    protected = _protect(block, noise, "after_encode", rng)
    if protected:
        block = protected[2]
    assembled = assemble(block, bell_pair())
    entangled = c3not_stage(assembled)
    current = entangled
    late = _protect(current, noise, "after_c3not", rng)
    if late:
        protected = late
        current = late[2]
    noisy, report, recovered, syndrome = protected
    transformed = hadamard_stage(current)
    return dict(
        psi_in=psi,
        encoded=encoded,
        assembled=assembled,
        entangled=entangled,
        transformed=transformed,
        noise_report=report,
        noisy=noisy,
        recovered=recovered,
        syndrome=syndrome,
    )


def teleport_leg(psi: StateVector, noise: NoiseSpec, rng: np.random.Generator) -> LegRecord:
    """Teleport one qubit, sampling the four-bit message from ``rng``."""
    _require(psi, 1, "teleport_leg")
    stages = _pre_measurement(psi, noise, rng)
    bits, residual, prob = measure_qubits(stages["transformed"], MESSAGE_QUBITS, rng)
    message = ClassicalMessage.from_string(bits)
    correction = classify(message)
    return LegRecord(
        **stages,
        message=message,
        message_prob=prob,
        correction=correction,
        residual=residual,
        output=apply_correction(residual, correction),
    )


def enumerate_leg(
    psi: StateVector, noise: NoiseSpec = NoiseSpec(), rng: np.random.Generator | None = None
) -> tuple[dict, list[Branch]]:
    """Run a leg to the Hadamard stage, then follow every measurement branch exactly.

    ``rng`` is only consulted for random noise and syndrome sampling; with
    ``rng=None`` the syndrome is resolved deterministically.
    """
    _require(psi, 1, "enumerate_leg")
    stages = _pre_measurement(psi, noise, rng)
    branches = []
    for bits, prob, residual in enumerate_outcomes(stages["transformed"], MESSAGE_QUBITS):
        message = ClassicalMessage.from_string(bits)
        op = classify(message)
        corrected = apply_correction(residual, op)
        branches.append(Branch(message, prob, residual, op, corrected, fidelity(corrected, psi)))
    return stages, branches


def run_forward(
    coords: BlochCoords,
    noise: NoiseSpec = NoiseSpec(),
    rng: np.random.Generator | None = None,
    processing: bool = False,
) -> ProtocolTrace:
    if rng is None:
        rng = np.random.default_rng()
    psi0 = make_input_state(coords)
    leg = teleport_leg(psi0, noise, rng)
    return ProtocolTrace(
        coords_in=coords,
        forward=leg,
        fidelity_operator=fidelity(leg.output, psi0),
        processing_state=processing_stage(leg.output) if processing else None,
    )


def run_round_trip(
    coords: BlochCoords,
    cmd: ControlCommand = ControlCommand(),
    noise_fwd: NoiseSpec = NoiseSpec(),
    noise_ret: NoiseSpec = NoiseSpec(),
    rng: np.random.Generator | None = None,
    processing: bool = False,
) -> ProtocolTrace:
    """Forward leg, operator-side control rotations, then the return leg."""
    if rng is None:
        rng = np.random.default_rng()
    trace = run_forward(coords, noise_fwd, rng, processing=processing)
    trace.command = cmd
    trace.psi6 = apply_control(trace.psi5, cmd)
    trace.return_leg = teleport_leg(trace.psi6, noise_ret, rng)
    target = apply_control(trace.psi0, cmd)
    trace.fidelity_satellite = fidelity(trace.return_leg.output, target)
    return trace
