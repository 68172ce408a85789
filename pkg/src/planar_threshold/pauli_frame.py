"""Sign-free Pauli frame propagated through Clifford gates.

A frame stores one X bit and one Z bit per qubit.  The arrays may carry a
trailing batch axis, in which case every operation acts on all frames of the
batch at once; qubit indices always address the leading axis.

All operations mutate the frame in place and return it for chaining.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

PauliTerm = Mapping[int, str]

_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class PauliFrame:
    __slots__ = ("x", "z")

    def __init__(self, n_qubits: int, batch: int | None = None):
        shape = (n_qubits,) if batch is None else (n_qubits, batch)
        self.x = np.zeros(shape, dtype=bool)
        self.z = np.zeros(shape, dtype=bool)

    @property
    def n_qubits(self) -> int:
        return self.x.shape[0]

    def copy(self) -> "PauliFrame":
        out = PauliFrame.__new__(PauliFrame)
        out.x = self.x.copy()
        out.z = self.z.copy()
        return out

    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def term(self) -> dict[int, str]:
        """The frame as a sparse ``{qubit: "X"|"Y"|"Z"}`` map (unbatched only)."""
        if self.x.ndim != 1:
            raise ValueError("term() is only defined for unbatched frames")
        out = {}
        for q in np.flatnonzero(self.x | self.z):
            out[int(q)] = "Y" if self.x[q] and self.z[q] else ("X" if self.x[q] else "Z")
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliFrame):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __repr__(self) -> str:
        if self.x.ndim == 1:
            return f"PauliFrame({self.term()})"
        return f"PauliFrame(n_qubits={self.n_qubits}, batch={self.x.shape[1]})"


def _check_qubit(frame: PauliFrame, q: int) -> None:
    if not 0 <= q < frame.n_qubits:
        raise IndexError(f"qubit {q} out of range for {frame.n_qubits} qubits")


def apply_pauli(frame: PauliFrame, term: PauliTerm) -> PauliFrame:
    """XOR a Pauli term into the frame (phases dropped)."""
    for q, pauli in term.items():
        _check_qubit(frame, q)
        try:
            bx, bz = _BITS[pauli]
        except KeyError:
            raise ValueError(f"unknown Pauli {pauli!r} on qubit {q}") from None
        if bx:
            frame.x[q] ^= True
        if bz:
            frame.z[q] ^= True
    return frame


def apply_multi_target_cnot(frame: PauliFrame, control: int, targets: Sequence[int]) -> PauliFrame:
    """One control, many targets: X spreads control -> targets, Z targets -> control."""
    targets = list(targets)
    if control in targets:
        raise ValueError(f"control {control} is also a target")
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets in {targets}")
    _check_qubit(frame, control)
    for t in targets:
        _check_qubit(frame, t)
    frame.x[targets] ^= frame.x[control]
    frame.z[control] ^= np.bitwise_xor.reduce(frame.z[targets], axis=0)
    return frame


def apply_cnot(frame: PauliFrame, control: int, target: int) -> PauliFrame:
    return apply_multi_target_cnot(frame, control, [target])


def apply_hadamard(frame: PauliFrame, qubit: int | Iterable[int]) -> PauliFrame:
    if isinstance(qubit, (int, np.integer)):
        _check_qubit(frame, int(qubit))
        idx = [int(qubit)]
    else:
        idx = list(qubit)
        for q in idx:
            _check_qubit(frame, q)
    tmp = frame.x[idx].copy()
    frame.x[idx] = frame.z[idx]
    frame.z[idx] = tmp
    return frame


def measure_z(frame: PauliFrame, qubit: int, flip=False):
    """Z-basis readout parity (0 = ideal outcome), then reset the qubit.

    ``flip`` may be a bool or, for batched frames, an array over the batch.
    """
    _check_qubit(frame, qubit)
    outcome = frame.x[qubit] ^ flip
    frame.x[qubit] = False
    frame.z[qubit] = False
    if np.ndim(outcome) == 0:
        return int(outcome)
    return np.asarray(outcome, dtype=bool)
