"""Three-qubit bit-flip repetition code: encoding, noise, syndrome and recovery."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import gates
from .statevector import StateVector, apply_1q, apply_controlled, basis_state, measure_projectors, tensor

NOISE_KINDS = ("none", "flip_q0", "flip_q1", "flip_q2", "random_single")
PLACEMENTS = ("after_encode", "after_c3not")


@dataclass(frozen=True)
class BlochCoords:
    """Polar angle ``theta`` in [0, pi] and azimuth ``phi`` in [0, 2 pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("Bloch angles must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi={self.phi!r} outside [0, 2pi)")

    @property
    def a(self) -> complex:
        return complex(math.cos(self.theta / 2))

    @property
    def b(self) -> complex:
        return complex(np.exp(1j * self.phi) * math.sin(self.theta / 2))


@dataclass(frozen=True)
class SyndromeOutcome:
    """Index of the projector that fired and the probability it had of firing."""

    s: int
    prob: float = 1.0

    def __post_init__(self):
        if self.s not in (0, 1, 2, 3):
            raise ValueError(f"syndrome index must be 0..3, got {self.s}")

    @property
    def affected_qubit(self) -> Optional[int]:
        return None if self.s == 0 else self.s - 1

    @property
    def label(self) -> str:
        return f"P{self.s}"


@dataclass(frozen=True)
class NoiseSpec:
    """Bit-flip noise on the encoded block.

    ``random_single`` flips each of the three encoded qubits independently
    with probability ``p``, so two or three flips are possible.
    """

    kind: str = "none"
    placement: str = "after_encode"
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.placement not in PLACEMENTS:
            raise ValueError(f"unknown noise placement {self.placement!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"flip probability {self.p!r} outside [0, 1]")


@dataclass(frozen=True)
class NoiseReport:
    kind: str
    placement: str
    flipped: Tuple[int, ...] = ()


def make_input_state(coords: BlochCoords) -> StateVector:
    return StateVector([coords.a, coords.b])


def encode(state: StateVector) -> StateVector:
    """a|0> + b|1>  ->  a|000> + b|111> via two CNOTs onto fresh ancillae."""
    if state.num_qubits != 1:
        raise ValueError("encode expects a single-qubit state")
    psi = tensor(state, basis_state(2, "00"))
    psi = apply_controlled(psi, {0}, 1, gates.pauli_x())
    return apply_controlled(psi, {0}, 2, gates.pauli_x())


def flip(state: StateVector, *qubits: int) -> StateVector:
    for q in qubits:
        state = apply_1q(state, gates.pauli_x(), q)
    return state


def inject_noise(
    state: StateVector, spec: NoiseSpec, rng: np.random.Generator | None = None
) -> tuple[StateVector, NoiseReport]:
    if spec.kind == "none":
        flipped: tuple[int, ...] = ()
    elif spec.kind == "random_single":
        if rng is None:
            raise ValueError("random noise needs an rng")
        draws = rng.random(3)
        flipped = tuple(int(q) for q in np.flatnonzero(draws < spec.p))
    else:
        flipped = (int(spec.kind[-1]),)
    return flip(state, *flipped), NoiseReport(spec.kind, spec.placement, flipped)


def diagnose_and_recover(
    state: StateVector, rng: np.random.Generator | None = None
) -> tuple[StateVector, SyndromeOutcome]:
    """Measure P0..P3 on qubits 0-2 and undo the indicated flip."""
    s, collapsed, prob = measure_projectors(state, gates.syndrome_projectors(), rng)
    outcome = SyndromeOutcome(s, prob)
    if outcome.affected_qubit is not None:
        collapsed = flip(collapsed, outcome.affected_qubit)
    return collapsed, outcome
