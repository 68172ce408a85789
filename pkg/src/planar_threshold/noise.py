"""Single-parameter circuit noise and reproducible random streams.

Preparation and measurement each flip with probability ``p``.  Every
multi-qubit gate is followed by n-qubit depolarizing noise: with probability
``p`` one of the ``4**n - 1`` non-identity Pauli terms, chosen uniformly.
Single-qubit gates are noiseless.

Depolarizing terms are encoded as integers in ``[0, 4**n)``; base-4 digit
``j`` is the Pauli on the gate's ``j``-th qubit with bit 0 = X and bit 1 = Z
(so 1 = X, 2 = Z, 3 = Y).  Index 0 is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_GATE_QUBITS = 5

_DIGIT_PAULI = {1: "X", 2: "Z", 3: "Y"}


@dataclass(frozen=True)
class NoiseParams:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"error probability must lie in [0, 1], got {self.p}")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial, fixed by ``(seed, trial)`` alone."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))


def sample_flip(p: float, rng: np.random.Generator) -> bool:
    return bool(rng.random() < p)


def sample_depolarizing_indices(n_qubits, p: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """Vectorised depolarizing draws as term indices (0 = no error).

    ``n_qubits`` may be an array broadcastable to ``size`` so gates of
    different width can be sampled in a single call.
    """
    n = np.asarray(n_qubits)
    if np.any(n < 1) or np.any(n > MAX_GATE_QUBITS):
        raise ValueError(f"gate width must be in 1..{MAX_GATE_QUBITS}")
    if size is None:
        size = n.shape
    hits = rng.random(size) < p
    out = np.zeros(size, dtype=np.int64)
    if hits.any():
        highs = np.broadcast_to(4 ** n.astype(np.int64), size)[hits]
        out[hits] = rng.integers(1, highs)
    return out


def pauli_term_from_index(index: int, qubits: Sequence[int]) -> dict[int, str]:
    if not 0 <= index < 4 ** len(qubits):
        raise ValueError(f"term index {index} out of range for {len(qubits)} qubits")
    term = {}
    for j, q in enumerate(qubits):
        digit = (index >> (2 * j)) & 3
        if digit:
            term[q] = _DIGIT_PAULI[digit]
    return term


def sample_depolarizing(n_qubits: int, p: float, rng: np.random.Generator) -> dict[int, str]:
    """One depolarizing draw as a sparse term over gate positions ``0..n-1``."""
    index = int(sample_depolarizing_indices(n_qubits, p, rng, size=()))
    return pauli_term_from_index(index, range(n_qubits))


def single_qubit_marginal(n_qubits: int, p: float) -> float:
    """Probability that one given qubit of an n-qubit depolarized gate is hit."""
    return p * (4**n_qubits - 4 ** (n_qubits - 1)) / (4**n_qubits - 1)
