"""Fixed gates, rotation/phase operators and the bit-flip syndrome projectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

_SQRT1_2 = 1 / math.sqrt(2)


def identity() -> np.ndarray:
    return np.eye(2, dtype=np.complex128)


def pauli_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=np.complex128)


def pauli_y() -> np.ndarray:
    return np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


def pauli_z() -> np.ndarray:
    return np.array([[1, 0], [0, -1]], dtype=np.complex128)


def hadamard() -> np.ndarray:
    return _SQRT1_2 * np.array([[1, 1], [1, -1]], dtype=np.complex128)


def _finite(angle: float, name: str) -> float:
    angle = float(angle)
    if not math.isfinite(angle):
        raise ValueError(f"{name} must be finite, got {angle!r}")
    return angle


def rot_x(theta: float) -> np.ndarray:
    """exp(-i theta X / 2)."""
    t = _finite(theta, "theta") / 2
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def rot_y(theta: float) -> np.ndarray:
    """exp(-i theta Y / 2); real-valued."""
    t = _finite(theta, "theta") / 2
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rot_z(theta: float) -> np.ndarray:
    """exp(-i theta Z / 2) = diag(e^{-i theta/2}, e^{i theta/2})."""
    t = _finite(theta, "theta") / 2
    return np.array([[np.exp(-1j * t), 0], [0, np.exp(1j * t)]], dtype=np.complex128)


def phase_global(delta: float) -> np.ndarray:
    """e^{i delta} times the identity."""
    return np.exp(1j * _finite(delta, "delta")) * identity()


ROTATIONS = {"x": rot_x, "y": rot_y, "z": rot_z, "global_phase": phase_global}


@dataclass(frozen=True)
class Projector:
    """Diagonal projector onto a set of computational basis strings.

    ``bitstrings`` are read on ``qubits`` in order; the projector acts as the
    identity on every other qubit of the state it is applied to.
    """

    bitstrings: Tuple[str, ...]
    qubits: Tuple[int, ...] = (0, 1, 2)
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "bitstrings", tuple(self.bitstrings))
        object.__setattr__(self, "qubits", tuple(self.qubits))
        for b in self.bitstrings:
            if len(b) != len(self.qubits) or set(b) - {"0", "1"}:
                raise ValueError(f"bitstring {b!r} does not match qubits {self.qubits}")

    def matrix(self) -> np.ndarray:
        """Dense 2^k x 2^k matrix on the projector's own qubits."""
        dim = 2 ** len(self.qubits)
        m = np.zeros((dim, dim), dtype=np.complex128)
        for b in self.bitstrings:
            m[int(b, 2), int(b, 2)] = 1.0
        return m


def syndrome_projectors() -> list[Projector]:
    """P0..P3 on qubits 0-2: no error, then a flip on the first/second/third qubit."""
    return [
        Projector(("000", "111"), label="P0"),
        Projector(("100", "011"), label="P1"),
        Projector(("010", "101"), label="P2"),
        Projector(("001", "110"), label="P3"),
    ]
