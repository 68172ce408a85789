"""Planar surface code geometry.

Everything lives on a doubled integer grid of side ``2d - 1``.  Data qubits
sit on sites whose row and column have the same parity, stars on
(odd row, even column) sites and plaquettes on (even row, odd column) sites.
Each stabilizer owns one ancilla qubit placed on the stabilizer's own site,
which gives the interleaved data/ancilla arrangement of a Rydberg array.

Qubit ids: data qubits first (row-major), then one ancilla per stabilizer in
stabilizer-id order.  Stabilizer ids: stars first (row-major), then
plaquettes (row-major).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple


class Coord(NamedTuple):
    row: int
    col: int


class Kind(str, enum.Enum):
    STAR = "star"
    PLAQUETTE = "plaquette"


@dataclass(frozen=True)
class StabilizerSpec:
    id: int
    kind: Kind
    coord: Coord
    ancilla: int
    support: tuple[int, ...]
    stage: int


@dataclass(frozen=True)
class PlanarCodeLayout:
    distance: int
    data_qubits: tuple[Coord, ...]
    stabilizers: tuple[StabilizerSpec, ...]
    logical_x_support: tuple[int, ...]
    logical_z_support: tuple[int, ...]
    stages: tuple[tuple[int, ...], ...]
    _index: dict[Coord, int] = field(repr=False, compare=False, default_factory=dict)

    @property
    def n_data(self) -> int:
        return len(self.data_qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.data_qubits) + len(self.stabilizers)

    def stabilizers_of(self, kind: Kind) -> tuple[StabilizerSpec, ...]:
        return tuple(s for s in self.stabilizers if s.kind is kind)

    def data_index(self, coord: Coord | tuple[int, int]) -> int:
        return self._index[Coord(*coord)]

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "data_qubits": [
                {"id": i, "row": c.row, "col": c.col} for i, c in enumerate(self.data_qubits)
            ],
            "stabilizers": [
                {
                    "id": s.id,
                    "kind": s.kind.value,
                    "row": s.coord.row,
                    "col": s.coord.col,
                    "ancilla": s.ancilla,
                    "support": list(s.support),
                    "stage": s.stage,
                }
                for s in self.stabilizers
            ],
            "logical_x_support": list(self.logical_x_support),
            "logical_z_support": list(self.logical_z_support),
            "stages": [list(stage) for stage in self.stages],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _neighbours(coord: Coord, size: int) -> list[Coord]:
    r, c = coord
    out = []
    for dr, dc in ((-1, 0), (0, -1), (0, 1), (1, 0)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < size and 0 <= cc < size:
            out.append(Coord(rr, cc))
    return out


def _stage_of(kind: Kind, coord: Coord) -> int:
    # Adjacent stabilizers of one kind differ by 2 in exactly one coordinate,
    # so the parity of (row + col) / 2 separates them.
    parity = ((coord.row + coord.col - 1) // 2) % 2
    return parity if kind is Kind.STAR else 2 + parity


@lru_cache(maxsize=None)
def build_planar_code(distance: int) -> PlanarCodeLayout:
    """Build the distance-``distance`` planar code.

    Layouts are immutable and cached, so repeated calls are free.
    """
    if isinstance(distance, bool) or not isinstance(distance, int):
        raise TypeError(f"distance must be an int, got {distance!r}")
    if distance < 2:
        raise ValueError(f"distance must be >= 2, got {distance}")
    size = 2 * distance - 1

    data = [Coord(r, c) for r in range(size) for c in range(size) if (r + c) % 2 == 0]
    index = {c: i for i, c in enumerate(data)}

    sites = [(Kind.STAR, Coord(r, c)) for r in range(1, size, 2) for c in range(0, size, 2)]
    sites += [(Kind.PLAQUETTE, Coord(r, c)) for r in range(0, size, 2) for c in range(1, size, 2)]

    stabilizers = []
    for sid, (kind, coord) in enumerate(sites):
        support = tuple(sorted(index[n] for n in _neighbours(coord, size)))
        stabilizers.append(
            StabilizerSpec(
                id=sid,
                kind=kind,
                coord=coord,
                ancilla=len(data) + sid,
                support=support,
                stage=_stage_of(kind, coord),
            )
        )

    stages = tuple(
        tuple(s.id for s in stabilizers if s.stage == k) for k in range(4)
    )
    # Z-bar runs down column 0 (top to bottom boundary), X-bar along row 0.
    logical_z = tuple(index[Coord(r, 0)] for r in range(0, size, 2))
    logical_x = tuple(index[Coord(0, c)] for c in range(0, size, 2))

    return PlanarCodeLayout(
        distance=distance,
        data_qubits=tuple(data),
        stabilizers=tuple(stabilizers),
        logical_x_support=logical_x,
        logical_z_support=logical_z,
        stages=stages,
        _index=index,
    )


def measurement_schedule(layout: PlanarCodeLayout) -> tuple[tuple[int, ...], ...]:
    """Four stages of stabilizer ids: stars in 0 and 1, plaquettes in 2 and 3."""
    return layout.stages


def logical_operator(layout: PlanarCodeLayout, kind: str) -> tuple[int, ...]:
    """Support of the logical ``"X"`` or ``"Z"`` representative."""
    kind = kind.upper()
    if kind == "X":
        return layout.logical_x_support
    if kind == "Z":
        return layout.logical_z_support
    raise ValueError(f"logical operator kind must be 'X' or 'Z', got {kind!r}")
