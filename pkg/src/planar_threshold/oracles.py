"""Brute-force references kept independent of the simulation and decoding paths."""

from __future__ import annotations

from typing import Mapping, Sequence

from .lattice import Kind, PlanarCodeLayout


def symplectic_syndrome(layout: PlanarCodeLayout, term: Mapping[int, str]) -> list[int]:
    """Parity of each generator against a Pauli term, straight from the supports."""
    out = []
    for s in layout.stabilizers:
        # Stars are X-type: they see Z components.  Plaquettes see X components.
        hit = "ZY" if s.kind is Kind.STAR else "XY"
        out.append(sum(1 for q in s.support if term.get(q, "I") in hit) % 2)
    return out


def anticommutes(a: Mapping[int, str], b: Mapping[int, str]) -> bool:
    count = 0
    for q in set(a) & set(b):
        if a[q] != b[q]:
            count += 1
    return count % 2 == 1


def brute_force_min_perfect_matching(n: int, edges: Sequence[tuple[int, int, float]]):
    """``(weight, pairs)`` of a cheapest perfect matching by full enumeration, or ``None``."""
    w = {}
    for i, j, wt in edges:
        w[(min(i, j), max(i, j))] = wt
    best = None

    def rec(remaining: tuple[int, ...], acc, pairs):
        nonlocal best
        if not remaining:
            if best is None or acc < best[0]:
                best = (acc, list(pairs))
            return
        a = remaining[0]
        for b in remaining[1:]:
            if (a, b) in w:
                rest = tuple(x for x in remaining if x != a and x != b)
                pairs.append((a, b))
                rec(rest, acc + w[(a, b)], pairs)
                pairs.pop()

    rec(tuple(range(n)), 0, [])
    return best
