"""Small exhaustive checks run by ``planar-threshold --mode selftest``."""

from __future__ import annotations

import itertools
import random
from typing import Callable

from .blossom import min_weight_perfect_matching
from .circuit import code_capacity_history, no_faults, run_round, run_trial
from .decoder import decode, logical_failure
from .lattice import build_planar_code
from .noise import NoiseParams, trial_rng
from .oracles import brute_force_min_perfect_matching, symplectic_syndrome
from .pauli_frame import PauliFrame, apply_pauli

PAULIS = ("I", "X", "Y", "Z")


def check_syndrome_oracle(distance: int = 2) -> tuple[bool, str]:
    """Every Pauli error on the data qubits gives the symplectic syndrome in round 0."""
    layout = build_planar_code(distance)
    params = NoiseParams(0.0)
    faults = no_faults(layout, 1)
    bad = 0
    total = 0
    for combo in itertools.product(PAULIS, repeat=layout.n_data):
        term = {q: P for q, P in enumerate(combo) if P != "I"}
        frame = apply_pauli(PauliFrame(layout.n_qubits), term)
        got = run_round(layout, frame, params, faults=(faults.prep[0], faults.gate[0], faults.meas[0]))
        bad += list(got.astype(int)) != symplectic_syndrome(layout, term)
        total += 1
    return bad == 0, f"{total - bad}/{total} errors matched"


def check_code_capacity(distance: int = 3, max_weight: int = 1) -> tuple[bool, str]:
    """All errors up to ``max_weight`` data qubits are corrected from one perfect round."""
    layout = build_planar_code(distance)
    failed = 0
    total = 0
    for w in range(1, max_weight + 1):
        for qubits in itertools.combinations(range(layout.n_data), w):
            for paulis in itertools.product("XYZ", repeat=w):
                frame = apply_pauli(PauliFrame(layout.n_data), dict(zip(qubits, paulis)))
                history = code_capacity_history(layout, frame)
                xf, zf = logical_failure(layout, frame, decode(layout, history))
                failed += xf or zf
                total += 1
    return failed == 0, f"{total - failed}/{total} errors corrected"


def check_matching(instances: int = 200, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(instances):
        n = rng.choice((2, 4, 6, 8, 10))
        edges = [(i, j, rng.randint(1, 100)) for i, j in itertools.combinations(range(n), 2)]
        w = {(i, j): x for i, j, x in edges}
        got = sum(w[pair] for pair in min_weight_perfect_matching(n, edges))
        bad += got != brute_force_min_perfect_matching(n, edges)[0]
    return bad == 0, f"{instances - bad}/{instances} graphs matched brute force"


def check_zero_noise(distances=(2, 3), trials: int = 50) -> tuple[bool, str]:
    params = NoiseParams(0.0)
    for d in distances:
        layout = build_planar_code(d)
        for i in range(trials):
            h = run_trial(layout, params, rng=trial_rng(0, i))
            if h.rounds.any() or any(logical_failure(layout, h.final_frame, decode(layout, h))):
                return False, f"noise-free trial {i} at d={d} produced events or a failure"
    return True, f"{trials} noise-free trials at d={list(distances)} clean"


CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "syndrome oracle d=2 (all 4^5 errors)": check_syndrome_oracle,
    "code capacity d=3 (all weight-1 errors)": check_code_capacity,
    "blossom vs brute force (200 graphs)": check_matching,
    "zero noise d=2,3": check_zero_noise,
}


def run_selftest(echo: Callable[[str], None] = print) -> bool:
    ok = True
    for name, check in CHECKS.items():
        passed, detail = check()
        echo(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
        ok &= passed
    return ok
