import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planar_threshold.circuit import (
    TrialFaults,
    code_capacity_history,
    detection_event_array,
    detection_events,
    ideal_syndrome,
    no_faults,
    run_round,
    run_trial,
    sample_trial_faults,
    simulate_batch,
    stack_faults,
)
from planar_threshold.lattice import Kind, build_planar_code
from planar_threshold.noise import NoiseParams, pauli_term_from_index, trial_rng
from planar_threshold.oracles import symplectic_syndrome
from planar_threshold.pauli_frame import PauliFrame, apply_pauli

CLEAN = NoiseParams(0.0)


def single_fault(layout, rounds, r, sid, prep=False, gate=0, meas=False):
    f = no_faults(layout, rounds)
    f.prep[r, sid] = prep
    f.gate[r, sid] = gate
    f.meas[r, sid] = meas
    return f


def with_data_error(layout, term):
    frame = PauliFrame(layout.n_qubits)
    return apply_pauli(frame, term)


def test_d2_every_data_error_gives_symplectic_syndrome():
    lay = build_planar_code(2)
    f = no_faults(lay, 1)
    for combo in itertools.product("IXYZ", repeat=lay.n_data):
        term = {q: p for q, p in enumerate(combo) if p != "I"}
        got = run_round(lay, with_data_error(lay, term), CLEAN, faults=(f.prep[0], f.gate[0], f.meas[0]))
        assert got.astype(int).tolist() == symplectic_syndrome(lay, term)


@given(st.integers(2, 6), st.data())
def test_circuit_syndrome_matches_oracle(d, data):
    lay = build_planar_code(d)
    combo = data.draw(st.lists(st.sampled_from("IXYZ"), min_size=lay.n_data, max_size=lay.n_data))
    term = {q: p for q, p in enumerate(combo) if p != "I"}
    frame = with_data_error(lay, term)
    f = no_faults(lay, 1)
    want = symplectic_syndrome(lay, term)
    assert ideal_syndrome(lay, frame).astype(int).tolist() == want
    assert run_round(lay, frame, CLEAN, faults=(f.prep[0], f.gate[0], f.meas[0])).astype(int).tolist() == want
    # The readout leaves the data frame unchanged and the ancillas reset.
    assert frame == with_data_error(lay, term)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_noise_free_trial_is_silent(d):
    lay = build_planar_code(d)
    h = run_trial(lay, CLEAN, rng=trial_rng(0, 0))
    assert h.rounds.shape == (2 * d + 1, len(lay.stabilizers))
    assert not h.rounds.any()
    assert h.final_frame.is_identity()


@pytest.mark.parametrize("kind", ["prep", "meas"])
def test_ancilla_flip_is_a_timelike_pair(kind):
    lay = build_planar_code(3)
    sid, r = 4, 2
    h = run_trial(lay, CLEAN, faults=single_fault(lay, 6, r, sid, **{kind: True}))
    assert h.final_frame.is_identity()
    assert [(e.stabilizer, e.round) for e in detection_events(lay, h)] == [(sid, r), (sid, r + 1)]


@settings(max_examples=60)
@given(st.integers(2, 5), st.data())
def test_single_gate_fault_leaves_only_its_data_part(d, data):
    # One multi-target gate cannot spread a fault: the data qubits keep exactly
    # the data part of the term (seen through the plaquette Hadamards).
    lay = build_planar_code(d)
    s = data.draw(st.sampled_from(lay.stabilizers))
    rounds = 2
    r = data.draw(st.integers(0, rounds - 1))
    index = data.draw(st.integers(1, 4 ** (1 + len(s.support)) - 1))
    h = run_trial(lay, CLEAN, faults=single_fault(lay, rounds, r, s.id, gate=index))
    term = pauli_term_from_index(index, [s.ancilla, *s.support])
    term.pop(s.ancilla, None)
    if s.kind is Kind.PLAQUETTE:
        term = {q: {"X": "Z", "Z": "X", "Y": "Y"}[p] for q, p in term.items()}
    assert h.final_frame.term() == term
    # The final ideal round reports that data error.
    assert h.rounds[-1].astype(int).tolist() == symplectic_syndrome(lay, term)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_batch_matches_per_trial(d):
    lay = build_planar_code(d)
    faults = [sample_trial_faults(lay, 0.05, 2 * d, trial_rng(9, i)) for i in range(40)]
    hist, fx, fz = simulate_batch(lay, stack_faults(faults))
    for i, f in enumerate(faults):
        h = run_trial(lay, NoiseParams(0.05), faults=f)
        assert np.array_equal(hist[i], h.rounds)
        assert np.array_equal(fx[i], h.final_frame.x)
        assert np.array_equal(fz[i], h.final_frame.z)


def test_rng_and_fault_paths_agree():
    lay = build_planar_code(3)
    faults = sample_trial_faults(lay, 0.1, 6, trial_rng(1, 2))
    a = run_trial(lay, NoiseParams(0.1), faults=faults)
    b = run_trial(lay, NoiseParams(0.1), rounds=6, rng=trial_rng(1, 2))
    assert np.array_equal(a.rounds, b.rounds) and a.final_frame == b.final_frame


def test_detection_events_xor_consecutive_rounds():
    rounds = np.array([[0, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=bool)
    assert detection_event_array(rounds).astype(int).tolist() == [[0, 1, 0], [0, 0, 1], [1, 1, 0]]
    batched = np.stack([rounds, rounds])
    assert np.array_equal(detection_event_array(batched)[1], detection_event_array(rounds))


@given(st.integers(2, 6), st.data())
def test_events_telescope_to_final_syndrome(d, data):
    # XOR of all detection layers is the last (perfect) round, i.e. the
    # syndrome of the final data frame.
    lay = build_planar_code(d)
    seed = data.draw(st.integers(0, 2**32 - 1))
    h = run_trial(lay, NoiseParams(0.02), rng=trial_rng(seed, 0))
    ev = detection_event_array(h.rounds)
    assert np.array_equal(np.bitwise_xor.reduce(ev, axis=0), ideal_syndrome(lay, with_frame(lay, h.final_frame)))


def with_frame(lay, data):
    f = PauliFrame(lay.n_qubits)
    f.x[: lay.n_data] = data.x
    f.z[: lay.n_data] = data.z
    return f


def test_code_capacity_history():
    lay = build_planar_code(3)
    frame = apply_pauli(PauliFrame(lay.n_data), {4: "Y"})
    h = code_capacity_history(lay, frame)
    assert h.rounds.shape == (1, len(lay.stabilizers))
    assert h.rounds[0].astype(int).tolist() == symplectic_syndrome(lay, {4: "Y"})


def test_run_trial_requires_a_source():
    lay = build_planar_code(2)
    with pytest.raises(ValueError):
        run_trial(lay, CLEAN)
    with pytest.raises(ValueError):
        run_trial(lay, CLEAN, rounds=0, rng=trial_rng(0, 0))
    assert isinstance(no_faults(lay, 3), TrialFaults)
