import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcect.bitflip_code import (
    BlochCoords,
    NoiseSpec,
    SyndromeOutcome,
    diagnose_and_recover,
    encode,
    flip,
    inject_noise,
    make_input_state,
)
from qcect.statevector import StateVector, basis_state, fidelity, tensor

from conftest import coords_st, generic_coords_st
from oracles import codeword, flip_bits, oracle_recover

def as_state(block: dict) -> StateVector:
    return StateVector.from_kets(block)


class TestCoords:
    def test_poles_and_equator(self):
        assert make_input_state(BlochCoords(0, 0)).allclose(basis_state(1, "0"))
        assert make_input_state(BlochCoords(math.pi, 0)).allclose(basis_state(1, "1"))
        eq = make_input_state(BlochCoords(math.pi / 2, math.pi / 2))
        np.testing.assert_allclose(eq.amplitudes, np.array([1, 1j]) / math.sqrt(2), atol=1e-15)

    @pytest.mark.parametrize("theta,phi", [(-0.1, 0), (3.2, 0), (1, -0.1), (1, 2 * math.pi), (math.nan, 0)])
    def test_out_of_range(self, theta, phi):
        with pytest.raises(ValueError):
            BlochCoords(theta, phi)

    @given(coords_st)
    def test_amplitudes_unit(self, c):
        assert abs(abs(c.a) ** 2 + abs(c.b) ** 2 - 1) < 1e-12


class TestSyndromeOutcome:
    def test_affected(self):
        assert SyndromeOutcome(0).affected_qubit is None
        assert [SyndromeOutcome(s).affected_qubit for s in (1, 2, 3)] == [0, 1, 2]

    def test_range(self):
        with pytest.raises(ValueError):
            SyndromeOutcome(4)


class TestEncode:
    def test_basis(self):
        assert encode(basis_state(1, "0")).allclose(basis_state(3, "000"))
        assert encode(basis_state(1, "1")).allclose(basis_state(3, "111"))

    def test_plus(self):
        plus = StateVector([1, 1], normalize=True)
        expected = StateVector.from_kets({"000": 1, "111": 1}, normalize=True)
        assert encode(plus).allclose(expected)

    @given(coords_st)
    def test_codeword(self, c):
        assert encode(make_input_state(c)).allclose(as_state(codeword(c)), atol=1e-12)


class TestNoise:
    def test_flip_q1_with_spectators(self):
        c = BlochCoords(1.0, 0.4)
        rest = StateVector.from_kets({"00": 1, "11": 1}, normalize=True)
        noisy, report = inject_noise(tensor(as_state(codeword(c)), rest), NoiseSpec("flip_q1"))
        expected = tensor(as_state({"010": c.a, "101": c.b}), rest)
        assert noisy.allclose(expected) and report.flipped == (1,)

    def test_none(self):
        psi = as_state(codeword(BlochCoords(1.0, 0.4)))
        out, report = inject_noise(psi, NoiseSpec())
        assert out.allclose(psi, atol=0) and report.flipped == ()

    @pytest.mark.parametrize("seed", range(20))
    def test_random_zero_probability(self, seed):
        psi = as_state(codeword(BlochCoords(1.0, 0.4)))
        out, report = inject_noise(psi, NoiseSpec("random_single", p=0.0), np.random.default_rng(seed))
        assert out.allclose(psi, atol=0) and report.flipped == ()

    def test_random_certain(self):
        psi = basis_state(3, "000")
        out, report = inject_noise(psi, NoiseSpec("random_single", p=1.0), np.random.default_rng(0))
        assert out.allclose(basis_state(3, "111")) and report.flipped == (0, 1, 2)

    def test_random_rate(self):
        rng = np.random.default_rng(7)
        n, p = 4000, 0.25
        hits = np.zeros(3)
        for _ in range(n):
            _, report = inject_noise(basis_state(3, "000"), NoiseSpec("random_single", p=p), rng)
            hits[list(report.flipped)] += 1
        sigma = math.sqrt(n * p * (1 - p))
        assert np.all(np.abs(hits - n * p) <= 4 * sigma)

    def test_random_needs_rng(self):
        with pytest.raises(ValueError):
            inject_noise(basis_state(3, "000"), NoiseSpec("random_single", p=0.5))

    @pytest.mark.parametrize(
        "kwargs", [dict(kind="flip_q3"), dict(placement="after_hadamard"), dict(kind="random_single", p=1.5)]
    )
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ValueError):
            NoiseSpec(**kwargs)


class TestRecovery:
    def test_flip_on_second_qubit(self):
        c = BlochCoords(1.2, 2.0)
        rest = basis_state(2, "01")
        out, syn = diagnose_and_recover(tensor(as_state({"010": c.a, "101": c.b}), rest))
        assert syn.s == 2 and out.allclose(tensor(as_state(codeword(c)), rest))

    def test_no_error(self):
        c = BlochCoords(1.2, 2.0)
        psi = tensor(as_state(codeword(c)), basis_state(2, "11"))
        out, syn = diagnose_and_recover(psi)
        assert syn.s == 0 and out.allclose(psi)

    def test_double_flip_gives_logical_flip(self):
        c = BlochCoords(1.2, 2.0)
        out, syn = diagnose_and_recover(as_state({"011": c.a, "100": c.b}))
        assert syn.s == 1
        assert out.allclose(as_state({"111": c.a, "000": c.b}))

    @given(generic_coords_st, st.sampled_from([0, 1, 2]), st.integers(0, 2**32 - 1))
    def test_round_trip_single_flip(self, c, k, seed):
        enc = encode(make_input_state(c))
        noisy, _ = inject_noise(enc, NoiseSpec(f"flip_q{k}"))
        out, syn = diagnose_and_recover(noisy, np.random.default_rng(seed))
        assert syn.s == k + 1
        assert abs(fidelity(out, enc) - 1) < 1e-10

    @given(generic_coords_st, st.sampled_from([0, 1, 2]), st.integers(0, 2**32 - 1))
    def test_syndrome_is_certain(self, c, k, seed):
        noisy = flip(encode(make_input_state(c)), k)
        seen = {diagnose_and_recover(noisy, np.random.default_rng(seed + i))[1].s for i in range(5)}
        assert seen == {k + 1}

    @given(generic_coords_st, st.sampled_from(list(combinations(range(3), 2))))
    def test_double_flip_matches_oracle(self, c, pair):
        block = {flip_bits(k, pair): v for k, v in codeword(c).items()}
        s_oracle, fixed = oracle_recover(block)
        out, syn = diagnose_and_recover(flip(encode(make_input_state(c)), *pair))
        assert syn.s == s_oracle
        assert out.allclose(as_state(fixed), atol=1e-12)
        # the recovered block is the logical flip of the codeword
        logical = flip(encode(make_input_state(c)), 0, 1, 2)
        assert out.allclose(logical, atol=1e-12)
        enc = encode(make_input_state(c))
        overlap = abs(np.vdot(enc.amplitudes, logical.amplitudes)) ** 2
        assert abs(fidelity(out, enc) - overlap) < 1e-10

    def test_seeded_syndrome_on_superposed_errors(self):
        # an equal superposition of "no error" and "flip q0" collapses either way
        psi = StateVector.from_kets({"000": 1, "100": 1}, normalize=True)
        seen = {diagnose_and_recover(psi, np.random.default_rng(s))[1].s for s in range(40)}
        assert seen == {0, 1}
        for s in range(10):
            out, _ = diagnose_and_recover(psi, np.random.default_rng(s))
            assert out.allclose(basis_state(3, "000"))

    def test_triple_flip_is_invisible(self):
        c = BlochCoords(0.9, 1.3)
        enc = encode(make_input_state(c))
        out, syn = diagnose_and_recover(flip(enc, 0, 1, 2))
        assert syn.s == 0
        assert out.allclose(as_state({"111": c.a, "000": c.b}))
