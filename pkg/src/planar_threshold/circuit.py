"""Noisy staged syndrome extraction.

A stabilizer is read out through its ancilla: prepare ``|+>``, one
multi-target CNOT from the ancilla onto the support (plaquette supports are
conjugated by Hadamards), Hadamard on the ancilla, Z measurement.  A round
runs the four stages in order; a trial runs ``rounds`` noisy rounds and then
appends the ideal syndrome of the final data frame so every error chain ends
on a detection event or a boundary.

Faults for a whole trial are drawn up front into a :class:`TrialFaults`
record from the trial's own generator.  The per-trial reference path
(:func:`run_trial`) and the vectorised batch path (:func:`simulate_batch`)
consume the same record, so trial ``i`` of a batch is reproducible on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .lattice import Kind, PlanarCodeLayout, StabilizerSpec
from .noise import NoiseParams, pauli_term_from_index, sample_depolarizing_indices, sample_flip
from .pauli_frame import (
    PauliFrame,
    apply_hadamard,
    apply_multi_target_cnot,
    apply_pauli,
    measure_z,
)


class DetectionEvent(NamedTuple):
    stabilizer: int
    round: int
    kind: Kind


@dataclass(frozen=True)
class TrialFaults:
    """Pre-drawn faults, each array indexed ``[round, stabilizer]``."""

    prep: np.ndarray
    gate: np.ndarray
    meas: np.ndarray

    @property
    def rounds(self) -> int:
        return self.prep.shape[0]


@dataclass
class SyndromeHistory:
    rounds: np.ndarray
    """``(n_noisy_rounds + 1, n_stabilizers)`` parities; the last row is the ideal readout."""
    final_frame: PauliFrame
    """Data-qubit frame at the end of the trial."""


def gate_widths(layout: PlanarCodeLayout) -> np.ndarray:
    return np.array([1 + len(s.support) for s in layout.stabilizers], dtype=np.int64)


def sample_trial_faults(layout: PlanarCodeLayout, p: float, rounds: int, rng: np.random.Generator) -> TrialFaults:
    shape = (rounds, len(layout.stabilizers))
    prep = rng.random(shape) < p
    gate = sample_depolarizing_indices(gate_widths(layout), p, rng, size=shape)
    meas = rng.random(shape) < p
    return TrialFaults(prep=prep, gate=gate, meas=meas)


def no_faults(layout: PlanarCodeLayout, rounds: int) -> TrialFaults:
    shape = (rounds, len(layout.stabilizers))
    return TrialFaults(
        prep=np.zeros(shape, dtype=bool),
        gate=np.zeros(shape, dtype=np.int64),
        meas=np.zeros(shape, dtype=bool),
    )


def measure_stabilizer(
    layout: PlanarCodeLayout,
    stab: StabilizerSpec | int,
    frame: PauliFrame,
    params: NoiseParams,
    rng: np.random.Generator | None = None,
    faults: tuple[bool, int, bool] | None = None,
) -> int:
    """Run one stabilizer's readout circuit on ``frame`` and return its parity.

    ``faults = (prep_flip, gate_term_index, meas_flip)`` replaces sampling.
    """
    if isinstance(stab, (int, np.integer)):
        stab = layout.stabilizers[stab]
    anc = stab.ancilla
    support = list(stab.support)
    if faults is None:
        if rng is None:
            raise ValueError("either rng or faults is required")
        prep_flip = sample_flip(params.p, rng)
        term = int(sample_depolarizing_indices(1 + len(support), params.p, rng, size=()))
        meas_flip = sample_flip(params.p, rng)
    else:
        prep_flip, term, meas_flip = faults

    if prep_flip:
        frame.z[anc] ^= True  # |+> prepared as |->
    if stab.kind is Kind.PLAQUETTE:
        apply_hadamard(frame, support)
    apply_multi_target_cnot(frame, anc, support)
    if term:
        apply_pauli(frame, pauli_term_from_index(int(term), [anc] + support))
    if stab.kind is Kind.PLAQUETTE:
        apply_hadamard(frame, support)
    apply_hadamard(frame, anc)
    return measure_z(frame, anc, bool(meas_flip))


def run_round(
    layout: PlanarCodeLayout,
    frame: PauliFrame,
    params: NoiseParams,
    rng: np.random.Generator | None = None,
    faults: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """Measure every stabilizer once, stage by stage; returns parities by stabilizer id."""
    out = np.zeros(len(layout.stabilizers), dtype=bool)
    for stage in layout.stages:
        for sid in stage:
            f = None if faults is None else (faults[0][sid], faults[1][sid], faults[2][sid])
            out[sid] = measure_stabilizer(layout, sid, frame, params, rng=rng, faults=f)
    return out


def ideal_syndrome(layout: PlanarCodeLayout, frame: PauliFrame) -> np.ndarray:
    """Noise-free parities read directly off the data frame."""
    out = np.zeros(len(layout.stabilizers), dtype=bool)
    for s in layout.stabilizers:
        bits = frame.z if s.kind is Kind.STAR else frame.x
        out[s.id] = np.bitwise_xor.reduce(bits[list(s.support)])
    return out


def data_frame(layout: PlanarCodeLayout, frame: PauliFrame) -> PauliFrame:
    out = PauliFrame(layout.n_data)
    out.x[:] = frame.x[: layout.n_data]
    out.z[:] = frame.z[: layout.n_data]
    return out


def run_trial(
    layout: PlanarCodeLayout,
    params: NoiseParams,
    rounds: int | None = None,
    rng: np.random.Generator | None = None,
    faults: TrialFaults | None = None,
    initial: PauliFrame | None = None,
) -> SyndromeHistory:
    """One memory experiment: ``rounds`` noisy rounds (default ``2d``) plus a perfect one.

    ``initial`` is a data-qubit frame present before the first round.
    """
    if faults is None:
        rounds = 2 * layout.distance if rounds is None else rounds
        if rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {rounds}")
        if rng is None:
            raise ValueError("either rng or faults is required")
        faults = sample_trial_faults(layout, params.p, rounds, rng)
    frame = PauliFrame(layout.n_qubits)
    if initial is not None:
        frame.x[: layout.n_data] = initial.x
        frame.z[: layout.n_data] = initial.z
    history = np.zeros((faults.rounds + 1, len(layout.stabilizers)), dtype=bool)
    for r in range(faults.rounds):
        history[r] = run_round(layout, frame, params, faults=(faults.prep[r], faults.gate[r], faults.meas[r]))
    history[-1] = ideal_syndrome(layout, frame)
    return SyndromeHistory(rounds=history, final_frame=data_frame(layout, frame))


def code_capacity_history(layout: PlanarCodeLayout, frame: PauliFrame) -> SyndromeHistory:
    """Single perfect round on a data-qubit error, no circuit noise."""
    full = PauliFrame(layout.n_qubits)
    full.x[: layout.n_data] = frame.x
    full.z[: layout.n_data] = frame.z
    return SyndromeHistory(
        rounds=ideal_syndrome(layout, full)[None, :],
        final_frame=frame.copy(),
    )


def detection_event_array(rounds: np.ndarray) -> np.ndarray:
    """XOR of consecutive rounds along axis -2, with an all-zero round before the first."""
    rounds = np.asarray(rounds, dtype=bool)
    out = rounds.copy()
    out[..., 1:, :] ^= rounds[..., :-1, :]
    return out


def detection_events(layout: PlanarCodeLayout, history: SyndromeHistory) -> list[DetectionEvent]:
    ev = detection_event_array(history.rounds)
    kinds = [s.kind for s in layout.stabilizers]
    return [DetectionEvent(int(s), int(t), kinds[s]) for t, s in zip(*np.nonzero(ev))]


# Batched execution -------------------------------------------------------


@dataclass(frozen=True)
class _Stage:
    ancillas: np.ndarray  # (k,)
    support: np.ndarray  # (m,) flattened supports
    owner: np.ndarray  # (m,) position of each support entry's stabilizer in the stage
    offsets: np.ndarray  # (k,) start of each stabilizer in ``support``
    gate_qubits: np.ndarray  # (k, MAX) ancilla then support, padded with a scratch qubit
    stabs: np.ndarray  # (k,) stabilizer ids
    plaquette: bool


@lru_cache(maxsize=None)
def _stage_plan(layout: PlanarCodeLayout) -> tuple[_Stage, ...]:
    scratch = layout.n_qubits
    width = max(1 + len(s.support) for s in layout.stabilizers)
    plan = []
    for stage in layout.stages:
        specs = [layout.stabilizers[i] for i in stage]
        support, owner, offsets, gates = [], [], [], []
        for k, s in enumerate(specs):
            offsets.append(len(support))
            support.extend(s.support)
            owner.extend([k] * len(s.support))
            g = [s.ancilla, *s.support]
            gates.append(g + [scratch] * (width - len(g)))
        kinds = {s.kind for s in specs}
        assert len(kinds) == 1
        plan.append(
            _Stage(
                ancillas=np.array([s.ancilla for s in specs]),
                support=np.array(support),
                owner=np.array(owner),
                offsets=np.array(offsets),
                gate_qubits=np.array(gates),
                stabs=np.array(stage),
                plaquette=kinds.pop() is Kind.PLAQUETTE,
            )
        )
    return tuple(plan)


@lru_cache(maxsize=None)
def _syndrome_plan(layout: PlanarCodeLayout) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    support, offsets = [], []
    for s in layout.stabilizers:
        offsets.append(len(support))
        support.extend(s.support)
    star = np.array([s.kind is Kind.STAR for s in layout.stabilizers])
    return np.array(support), np.array(offsets), star


def _ideal_syndrome_batch(layout: PlanarCodeLayout, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    support, offsets, star = _syndrome_plan(layout)
    zs = np.bitwise_xor.reduceat(z[support], offsets, axis=0)
    xs = np.bitwise_xor.reduceat(x[support], offsets, axis=0)
    return np.where(star[:, None], zs, xs)


def stack_faults(faults: Sequence[TrialFaults]) -> TrialFaults:
    """Stack per-trial records into ``[round, stabilizer, trial]`` arrays."""
    return TrialFaults(
        prep=np.stack([f.prep for f in faults], axis=-1),
        gate=np.stack([f.gate for f in faults], axis=-1),
        meas=np.stack([f.meas for f in faults], axis=-1),
    )


def simulate_batch(layout: PlanarCodeLayout, faults: TrialFaults) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised :func:`run_trial` over stacked faults.

    Returns ``(history, final_x, final_z)`` with ``history`` shaped
    ``(batch, rounds + 1, n_stabilizers)`` and data frames ``(batch, n_data)``.
    """
    n_rounds, n_stabs, batch = faults.prep.shape
    x = np.zeros((layout.n_qubits + 1, batch), dtype=bool)
    z = np.zeros_like(x)
    history = np.zeros((n_rounds + 1, n_stabs, batch), dtype=bool)
    plan = _stage_plan(layout)
    n_slots = plan[0].gate_qubits.shape[1]
    for r in range(n_rounds):
        prep, gate, meas = faults.prep[r], faults.gate[r], faults.meas[r]
        for st in plan:
            anc, sup = st.ancillas, st.support
            z[anc] = prep[st.stabs]
            if st.plaquette:
                x[sup], z[sup] = z[sup], x[sup].copy()
            x[sup] ^= x[anc][st.owner]
            z[anc] ^= np.bitwise_xor.reduceat(z[sup], st.offsets, axis=0)
            term = gate[st.stabs]
            if term.any():
                for j in range(n_slots):
                    digit = (term >> (2 * j)) & 3
                    q = st.gate_qubits[:, j]
                    x[q] ^= (digit & 1).astype(bool)
                    z[q] ^= (digit >> 1).astype(bool)
            if st.plaquette:
                x[sup], z[sup] = z[sup], x[sup].copy()
            # Hadamard on the ancilla then Z readout: the outcome is the old Z bit.
            history[r, st.stabs] = z[anc] ^ meas[st.stabs]
            x[anc] = False
            z[anc] = False
    n_data = layout.n_data
    history[-1] = _ideal_syndrome_batch(layout, x[:n_data], z[:n_data])
    return (
        np.ascontiguousarray(history.transpose(2, 0, 1)),
        np.ascontiguousarray(x[:n_data].T),
        np.ascontiguousarray(z[:n_data].T),
    )
