# %% [markdown]
# # Closing the control loop
#
# The operator receives the orientation qubit, applies a correction built
# from rotations, and teleports the result back.  The satellite ends up
# holding the rotated state even with one bit flip on each leg.

# %%
import numpy as np

from qcect import BlochCoords, ControlCommand, NoiseSpec, run_round_trip


def bloch_vector(state):
    a, b = state.amplitudes
    return np.array([2 * (np.conj(a) * b).real, 2 * (np.conj(a) * b).imag, abs(a) ** 2 - abs(b) ** 2])


coords = BlochCoords(theta=0.3, phi=1.0)
command = ControlCommand((("y", np.pi / 2), ("z", -np.pi / 4)))

trace = run_round_trip(
    coords,
    command,
    noise_fwd=NoiseSpec("flip_q0"),
    noise_ret=NoiseSpec("flip_q2", placement="after_c3not"),
    rng=np.random.default_rng(2024),
)

# %%
print("satellite before :", np.round(bloch_vector(trace.psi0), 6))
print("operator receives:", np.round(bloch_vector(trace.psi5), 6), "F =", trace.fidelity_operator)
print("operator sends   :", np.round(bloch_vector(trace.psi6), 6))
print("satellite after  :", np.round(bloch_vector(trace.return_leg.output), 6), "F =", trace.fidelity_satellite)
print("syndromes        :", trace.syndrome.label, trace.return_leg.syndrome.label)
print("messages         :", trace.message, trace.return_message)
