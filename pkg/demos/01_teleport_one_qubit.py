# %% [markdown]
# # Teleporting the satellite's orientation qubit
#
# The satellite's orientation is a point (theta, phi) on the Bloch sphere,
# i.e. the qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.  We follow it
# through every stage of one noiseless teleportation leg.

# %%
import numpy as np

from qcect import (
    BlochCoords,
    assemble,
    bell_pair,
    c3not_stage,
    classify,
    apply_correction,
    encode,
    enumerate_outcomes,
    fidelity,
    hadamard_stage,
    make_input_state,
    ClassicalMessage,
)

coords = BlochCoords(theta=2 * np.pi / 3, phi=np.pi / 5)
psi0 = make_input_state(coords)
print("psi0 =", psi0.ket_string())

# %% [markdown]
# Encode into the bit-flip code and attach the shared Bell pair
# (qubits 3 and 4; qubit 4 stays with the ground operator).

# %%
psi1 = encode(psi0)
psi2 = assemble(psi1, bell_pair())
psi3 = c3not_stage(psi2)
psi4 = hadamard_stage(psi3)
for name, s in [("psi1", psi1), ("psi2", psi2), ("psi3", psi3)]:
    print(f"{name} [{s.num_qubits}q] = {s.ket_string()}")

# %% [markdown]
# After the Hadamards every 4-bit message is equally likely, and the
# operator's qubit sits in one of four Pauli-rotated copies of psi0.

# %%
for bits, prob, residual in enumerate_outcomes(psi4, [0, 1, 2, 3]):
    op = classify(ClassicalMessage.from_string(bits))
    fixed = apply_correction(residual, op)
    print(f"{bits}  p={prob:.4f}  residual={residual.ket_string(4):<40} {op}  F={fidelity(fixed, psi0):.12f}")
