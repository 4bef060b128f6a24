"""Dense pure-state simulation on a handful of qubits.

Basis convention
----------------
Qubit 0 is the leftmost symbol of a ket and the most significant bit of the
amplitude index, so ``|q0 q1 ... q(n-1)>`` lives at index
``sum(q_k * 2**(n - 1 - k))``.  Every function in this package uses it.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

NORM_ATOL = 1e-10
UNITARY_ATOL = 1e-10
PROB_CUTOFF = 1e-12

_EYE2 = np.eye(2)


class StateVector:
    """Unit-norm complex amplitude vector over ``num_qubits`` qubits.

    Instances are immutable; every operation returns a new state.
    """

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, amplitudes, normalize: bool = False):
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        size = amps.size
        if size < 2 or size & (size - 1):
            raise ValueError(f"amplitude count must be a power of two >= 2, got {size}")
        norm2 = float(np.vdot(amps, amps).real)
        # a NaN or Inf amplitude makes the squared norm non-finite
        if not np.isfinite(norm2):
            raise ValueError("amplitudes must be finite")
        if normalize:
            if norm2 == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / np.sqrt(norm2)
        elif not abs(norm2 - 1.0) <= NORM_ATOL:
            raise ValueError(f"state is not unit norm (|psi|^2 = {norm2!r})")
        amps.setflags(write=False)
        self.amplitudes = amps
        self.num_qubits = size.bit_length() - 1

    @classmethod
    def from_kets(cls, terms: Mapping[str, complex], normalize: bool = False) -> "StateVector":
        """Build a state from ``{"010": amp, ...}``; all labels must share one length."""
        lengths = {len(k) for k in terms}
        if len(lengths) != 1:
            raise ValueError("ket labels must all have the same length")
        n = lengths.pop()
        amps = np.zeros(2**n, dtype=np.complex128)
        for label, amp in terms.items():
            amps[_index_of(label)] += amp
        return cls(amps, normalize=normalize)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit (axis k is qubit k)."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def labels(self) -> list[str]:
        return [format(i, f"0{self.num_qubits}b") for i in range(2**self.num_qubits)]

    def ket_string(self, precision: int = 6, cutoff: float = 1e-12) -> str:
        parts = []
        for label, amp in zip(self.labels(), self.amplitudes):
            if abs(amp) <= cutoff:
                continue
            re, im = round(amp.real, precision), round(amp.imag, precision)
            if im == 0:
                coeff = f"{re:g}"
            elif re == 0:
                coeff = f"{im:g}j"
            else:
                coeff = f"({re:g}{im:+g}j)"
            parts.append(f"{coeff}|{label}>")
        return " + ".join(parts) if parts else "0"

    def allclose(self, other: "StateVector", atol: float = 1e-10) -> bool:
        return self.num_qubits == other.num_qubits and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=atol)
        )

    def __len__(self) -> int:
        return self.amplitudes.size

    def __repr__(self) -> str:
        return f"StateVector({self.ket_string()})"


def _index_of(bits: str) -> int:
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bitstring: {bits!r}")
    return int(bits, 2)


def _check_qubit(state: StateVector, q: int) -> None:
    if not 0 <= q < state.num_qubits:
        raise ValueError(f"qubit index {q} out of range for {state.num_qubits} qubits")


def _check_unitary(gate: np.ndarray) -> np.ndarray:
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got shape {gate.shape}")
    err = np.max(np.abs(gate.conj().T @ gate - _EYE2))
    if not err <= UNITARY_ATOL:  # also rejects NaN/Inf entries
        raise ValueError("gate is not unitary")
    return gate


def basis_state(num_qubits: int, bits: str) -> StateVector:
    if num_qubits < 1:
        raise ValueError("num_qubits must be positive")
    if len(bits) != num_qubits:
        raise ValueError(f"bitstring {bits!r} does not have {num_qubits} symbols")
    amps = np.zeros(2**num_qubits, dtype=np.complex128)
    amps[_index_of(bits)] = 1.0
    return StateVector(amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product with ``a``'s qubits leftmost."""
    return StateVector(np.outer(a.amplitudes, b.amplitudes).ravel())


def apply_1q(state: StateVector, gate, target: int) -> StateVector:
    gate = _check_unitary(gate)
    _check_qubit(state, target)
    return StateVector(_apply_on_axis(gate, state.amplitudes, state.num_qubits, target))


def _apply_on_axis(gate: np.ndarray, amps: np.ndarray, n: int, axis: int) -> np.ndarray:
    view = amps.reshape(2**axis, 2, 2 ** (n - axis - 1))
    return np.matmul(gate, view).reshape(-1)


def apply_controlled(state: StateVector, controls: Iterable[int], target: int, gate) -> StateVector:
    """Apply ``gate`` to ``target`` on the basis states where every control is 1."""
    gate = _check_unitary(gate)
    controls = sorted(set(controls))
    if target in controls:
        raise ValueError("target qubit overlaps the control set")
    for q in [*controls, target]:
        _check_qubit(state, q)
    psi = np.array(state.tensor())
    sel: list = [slice(None)] * state.num_qubits
    for c in controls:
        sel[c] = 1
    sel = tuple(sel)
    block = psi[sel]
    # controls are dropped from the slice, so the target axis shifts left
    axis = target - sum(c < target for c in controls)
    psi[sel] = _apply_on_axis(gate, block, block.ndim, axis).reshape(block.shape)
    return StateVector(psi)


def _outcome_table(state: StateVector, targets: Sequence[int]) -> np.ndarray:
    """Rows indexed by the measured bits (in ``targets`` order), columns by the rest."""
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError("measurement targets must be distinct")
    for q in targets:
        _check_qubit(state, q)
    rest = [q for q in range(state.num_qubits) if q not in targets]
    psi = np.transpose(state.tensor(), targets + rest)
    return psi.reshape(2 ** len(targets), -1)


def _post_state(state, targets, row_index, row, prob, remove) -> StateVector | None:
    if remove:
        if row.size == 1:
            return None
        return StateVector(row / np.sqrt(prob), normalize=True)
    kept = np.zeros((2 ** len(targets), row.size), dtype=np.complex128)
    kept[row_index] = row / np.sqrt(prob)
    rest = [q for q in range(state.num_qubits) if q not in targets]
    order = list(targets) + rest
    psi = kept.reshape((2,) * state.num_qubits)
    psi = np.transpose(psi, np.argsort(order))
    return StateVector(psi, normalize=True)


def measure_qubits(
    state: StateVector,
    targets: Sequence[int],
    rng: np.random.Generator,
    remove: bool = True,
) -> tuple[str, StateVector | None, float]:
    """Sample a computational-basis measurement of ``targets`` by the Born rule.

    Returns ``(bits, collapsed, prob)``.  With ``remove=True`` the measured
    qubits are dropped from ``collapsed`` (``None`` once nothing is left);
    otherwise they stay in place, projected onto ``bits``.
    """
    table = _outcome_table(state, targets)
    probs = np.sum(np.abs(table) ** 2, axis=1)
    total = probs.sum()
    if total == 0:
        raise RuntimeError("cannot measure a zero-norm state")
    cdf = np.cumsum(probs / total)
    k = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    k = min(k, len(probs) - 1)
    while probs[k] == 0:  # guard against landing on an empty bin at a cdf edge
        k -= 1
    bits = format(k, f"0{len(targets)}b")
    prob = float(probs[k])
    return bits, _post_state(state, list(targets), k, table[k], prob, remove), prob


def enumerate_outcomes(
    state: StateVector, targets: Sequence[int], remove: bool = True
) -> list[tuple[str, float, StateVector | None]]:
    """Every outcome of measuring ``targets`` with probability above 1e-12."""
    table = _outcome_table(state, targets)
    out = []
    for k, row in enumerate(table):
        prob = float(np.sum(np.abs(row) ** 2))
        if prob <= PROB_CUTOFF:
            continue
        bits = format(k, f"0{len(targets)}b")
        out.append((bits, prob, _post_state(state, list(targets), k, row, prob, remove)))
    return out


def measure_projectors(
    state: StateVector,
    projectors: Sequence,
    rng: np.random.Generator | None = None,
) -> tuple[int, StateVector, float]:
    """Projective measurement with a complete set of basis-diagonal projectors.

    ``projectors`` are :class:`qcect.gates.Projector` instances acting on a
    common set of qubits; their bitstrings must partition that subspace.
    With ``rng=None`` the most probable outcome is taken (lowest index on
    ties), which is exact whenever the state is an eigenstate of the set.
    """
    if not projectors:
        raise ValueError("need at least one projector")
    qubits = tuple(projectors[0].qubits)
    if any(tuple(p.qubits) != qubits for p in projectors):
        raise ValueError("projectors must act on the same qubits")
    seen: list[str] = [b for p in projectors for b in p.bitstrings]
    if len(seen) != len(set(seen)) or len(seen) != 2 ** len(qubits):
        raise ValueError("projectors do not sum to the identity on their qubits")

    table = _outcome_table(state, qubits)
    probs = np.array(
        [sum(np.sum(np.abs(table[int(b, 2)]) ** 2) for b in p.bitstrings) for p in projectors]
    )
    if rng is None:
        s = int(np.argmax(probs))
    else:
        cdf = np.cumsum(probs / probs.sum())
        s = min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")), len(probs) - 1)
        while probs[s] == 0:
            s -= 1
    prob = float(probs[s])
    if prob <= 0:
        raise RuntimeError("cannot measure a zero-norm state")
    masked = np.zeros_like(table)
    for b in projectors[s].bitstrings:
        masked[int(b, 2)] = table[int(b, 2)]
    rest = [q for q in range(state.num_qubits) if q not in qubits]
    psi = masked.reshape((2,) * state.num_qubits)
    psi = np.transpose(psi, np.argsort(list(qubits) + rest))
    return s, StateVector(psi / np.sqrt(prob), normalize=True), prob


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2))
