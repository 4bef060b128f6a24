import math
import sys
from functools import reduce

import numpy as np
import pytest
from hypothesis import strategies as st

from qcect import BlochCoords, StateVector

I2 = np.eye(2, dtype=complex)
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)


def dense_1q(gate, target, n):
    """Full 2^n operator I x ... x gate x ... x I built by Kronecker products."""
    ops = [gate if k == target else I2 for k in range(n)]
    return reduce(np.kron, ops)


def dense_controlled(gate, controls, target, n):
    """sum over control patterns: identity unless every control is |1>."""
    fire = reduce(np.kron, [P1 if k in controls else (gate if k == target else I2) for k in range(n)])
    on = reduce(np.kron, [P1 if k in controls else I2 for k in range(n)])
    return np.eye(2**n) - on + fire


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateVector(v, normalize=True)


def random_coords(rng):
    return BlochCoords(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


thetas = st.floats(min_value=0.0, max_value=math.pi, allow_nan=False)
phis = st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True, allow_nan=False)
coords_st = st.builds(BlochCoords, thetas, phis)
# generic angles, away from the poles where the two codewords stop being distinguishable
generic_coords_st = st.builds(
    BlochCoords,
    st.floats(min_value=0.2, max_value=math.pi - 0.2),
    phis,
)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(mod.RESULTS.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
