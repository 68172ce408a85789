"""Space-time minimum-weight perfect matching decoder.

Star detection events locate Z errors and plaquette events locate X errors;
the two kinds are decoded independently.  Stars end on the top and bottom
boundaries (the ends of a Z-bar string), plaquettes on the left and right.

Among matchings of equal minimum weight both engines prefer the one with the
fewest event-boundary pairs.  Weights are scaled by ``M`` (more than the
number of events that can occur) and each event-boundary edge gets ``+1``,
so the penalty can only separate matchings whose true weights tie.  With
integer weights this is exact.

Two engines produce the same minimum total weight:

* ``"blossom"``: the reference path.  Events and one boundary copy per event
  form a complete graph whose weights are shortest space-time distances; it
  is solved with :mod:`planar_threshold.blossom`.
* ``"pymatching"``: the same space-time lattice handed to PyMatching's sparse
  blossom solver, for large Monte Carlo batches.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .blossom import min_weight_perfect_matching
from .circuit import DetectionEvent, SyndromeHistory, detection_events
from .lattice import Kind, PlanarCodeLayout
from .pauli_frame import PauliFrame


@dataclass(frozen=True)
class KindGeometry:
    """Shortest spatial paths between stabilizers of one kind and to the boundary."""

    kind: Kind
    stab_ids: tuple[int, ...]
    local: dict[int, int]
    dist: np.ndarray  # (S, S) spatial steps
    boundary_dist: np.ndarray  # (S,)
    edges: tuple[tuple[int, int, int], ...]  # (a, b, qubit) between local indices
    boundary_edges: tuple[tuple[int, int], ...]  # (a, qubit)
    _pred: np.ndarray = field(repr=False)  # _pred[src, v] = (prev node, qubit) along a shortest path
    _bpred: tuple = field(repr=False)

    def path(self, a: int, b: int) -> list[int]:
        """Data qubits along the canonical shortest path between local stabilizers."""
        out = []
        v = b
        while v != a:
            prev, q = self._pred[a, v]
            out.append(int(q))
            v = int(prev)
        return out

    def boundary_path(self, a: int) -> list[int]:
        out = []
        v = a
        while True:
            prev, q = self._bpred[v]
            out.append(q)
            if prev == -1:
                return out
            v = prev


@lru_cache(maxsize=None)
def kind_geometry(layout: PlanarCodeLayout, kind: Kind) -> KindGeometry:
    stabs = [s for s in layout.stabilizers if s.kind is kind]
    local = {s.id: i for i, s in enumerate(stabs)}
    owners: dict[int, list[int]] = {}
    for s in stabs:
        for q in s.support:
            owners.setdefault(q, []).append(local[s.id])
    edges, boundary = [], []
    adj: list[list[tuple[int, int]]] = [[] for _ in stabs]
    for q in sorted(owners):
        own = owners[q]
        if len(own) == 2:
            a, b = own
            edges.append((a, b, q))
            adj[a].append((q, b))
            adj[b].append((q, a))
        else:
            boundary.append((own[0], q))
    for lst in adj:
        lst.sort()

    n = len(stabs)
    dist = np.full((n, n), -1, dtype=np.int64)
    pred = np.full((n, n, 2), -1, dtype=np.int64)
    for src in range(n):
        dist[src, src] = 0
        todo = deque([src])
        while todo:
            v = todo.popleft()
            for q, w in adj[v]:
                if dist[src, w] < 0:
                    dist[src, w] = dist[src, v] + 1
                    pred[src, w] = (v, q)
                    todo.append(w)

    # Multi-source search from the boundary, lowest boundary qubit first.
    bdist = np.full(n, -1, dtype=np.int64)
    bpred: list[tuple[int, int]] = [(-1, -1)] * n
    todo = deque()
    for a, q in sorted(boundary, key=lambda t: t[1]):
        if bdist[a] < 0:
            bdist[a] = 1
            bpred[a] = (-1, q)
            todo.append(a)
    while todo:
        v = todo.popleft()
        for q, w in adj[v]:
            if bdist[w] < 0:
                bdist[w] = bdist[v] + 1
                bpred[w] = (v, q)
                todo.append(w)

    return KindGeometry(
        kind=kind,
        stab_ids=tuple(s.id for s in stabs),
        local=local,
        dist=dist,
        boundary_dist=bdist,
        edges=tuple(edges),
        boundary_edges=tuple(boundary),
        _pred=pred,
        _bpred=tuple(bpred),
    )


@dataclass(frozen=True)
class MatchingGraph:
    """Complete matching graph: ``events`` then one boundary node per event."""

    kind: Kind
    events: tuple[DetectionEvent, ...]
    edges: tuple[tuple[int, int, float], ...]

    @property
    def n_nodes(self) -> int:
        return 2 * len(self.events)

    def is_boundary(self, node: int) -> bool:
        return node >= len(self.events)

    def to_dict(self) -> dict:
        k = len(self.events)
        nodes = [
            {"id": i, "type": "event", "stabilizer": e.stabilizer, "round": e.round}
            for i, e in enumerate(self.events)
        ] + [{"id": k + i, "type": "boundary", "partner": i} for i in range(k)]
        return {
            "kind": self.kind.value,
            "nodes": nodes,
            "edges": [{"u": u, "v": v, "weight": w} for u, v, w in self.edges],
        }


@dataclass(frozen=True)
class Correction:
    pauli: str  # "Z" from the star graph, "X" from the plaquette graph
    qubits: frozenset[int]


def build_matching_graph(
    layout: PlanarCodeLayout,
    events: Sequence[DetectionEvent],
    kind: Kind | None = None,
    spatial_weight: float = 1,
    time_weight: float = 1,
) -> MatchingGraph:
    if kind is None:
        kinds = {e.kind for e in events}
        if len(kinds) != 1:
            raise ValueError("kind is required unless all events share one kind")
        kind = kinds.pop()
    if any(e.kind is not kind for e in events):
        raise ValueError(f"all events must be of kind {kind.value}")
    if spatial_weight < 0 or time_weight < 0:
        raise ValueError("edge weights must be non-negative")
    geo = kind_geometry(layout, kind)
    events = tuple(sorted(events, key=lambda e: (e.round, e.stabilizer)))
    k = len(events)
    loc = [geo.local[e.stabilizer] for e in events]
    edges = []
    for i in range(k):
        for j in range(i + 1, k):
            w = spatial_weight * int(geo.dist[loc[i], loc[j]]) + time_weight * abs(events[i].round - events[j].round)
            edges.append((i, j, w))
    for i in range(k):
        edges.append((i, k + i, spatial_weight * int(geo.boundary_dist[loc[i]])))
    for i in range(k):
        for j in range(i + 1, k):
            edges.append((k + i, k + j, 0 * spatial_weight))
    return MatchingGraph(kind=kind, events=events, edges=tuple(edges))


def _tie_broken(graph: MatchingGraph) -> list[tuple[int, int, float]]:
    k = len(graph.events)
    scale = k + 1
    if all(float(w).is_integer() for _, _, w in graph.edges):
        return [(u, v, scale * int(w) + (1 if (u < k) != (v < k) else 0)) for u, v, w in graph.edges]
    # Non-integer weights: the penalty stays below half the smallest positive weight.
    unit = min((w for _, _, w in graph.edges if w > 0), default=1.0) / (2 * scale)
    return [(u, v, w + (unit if (u < k) != (v < k) else 0.0)) for u, v, w in graph.edges]


def mwpm(graph: MatchingGraph, tie_break: bool = True) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching of ``graph`` as node pairs.

    ``tie_break`` picks, among minimum-weight matchings, one with the fewest
    event-boundary pairs.
    """
    edges = _tie_broken(graph) if tie_break else graph.edges
    return min_weight_perfect_matching(graph.n_nodes, edges)


def matching_weight(graph: MatchingGraph, matching: Iterable[tuple[int, int]]) -> float:
    w = {(u, v): wt for u, v, wt in graph.edges}
    return sum(w[(min(u, v), max(u, v))] for u, v in matching)


def correction_from_matching(
    layout: PlanarCodeLayout, graph: MatchingGraph, matching: Iterable[tuple[int, int]]
) -> Correction:
    geo = kind_geometry(layout, graph.kind)
    toggled: set[int] = set()
    for u, v in matching:
        if graph.is_boundary(u) and graph.is_boundary(v):
            continue
        if graph.is_boundary(u):
            u, v = v, u
        a = geo.local[graph.events[u].stabilizer]
        if graph.is_boundary(v):
            path = geo.boundary_path(a)
        else:
            path = geo.path(a, geo.local[graph.events[v].stabilizer])
        toggled.symmetric_difference_update(path)
    return Correction(pauli="Z" if graph.kind is Kind.STAR else "X", qubits=frozenset(toggled))


def logical_failure(
    layout: PlanarCodeLayout, final_frame: PauliFrame, corrections: Iterable[Correction]
) -> tuple[bool, bool]:
    """``(x_failed, z_failed)`` for the residual ``final_frame * corrections``."""
    x = final_frame.x[: layout.n_data].copy()
    z = final_frame.z[: layout.n_data].copy()
    for c in corrections:
        idx = list(c.qubits)
        if c.pauli == "Z":
            z[idx] ^= True
        else:
            x[idx] ^= True
    x_failed = bool(np.bitwise_xor.reduce(x[list(layout.logical_z_support)]))
    z_failed = bool(np.bitwise_xor.reduce(z[list(layout.logical_x_support)]))
    return x_failed, z_failed


def decode(
    layout: PlanarCodeLayout,
    history: SyndromeHistory,
    spatial_weight: float = 1,
    time_weight: float = 1,
) -> tuple[Correction, Correction]:
    """Reference decode of one trial: ``(Z correction, X correction)``."""
    events = detection_events(layout, history)
    out = []
    for kind in (Kind.STAR, Kind.PLAQUETTE):
        graph = build_matching_graph(
            layout, [e for e in events if e.kind is kind], kind, spatial_weight, time_weight
        )
        out.append(correction_from_matching(layout, graph, mwpm(graph)))
    return out[0], out[1]


# Sparse engine -------------------------------------------------------------

_PM_MAX_WEIGHT = 2**24 - 1


class SpaceTimeMatcher:
    """PyMatching-backed decoder over ``n_layers`` syndrome layers.

    Detector index ``t * S + a`` is local stabilizer ``a`` of the kind in layer
    ``t``.  Spatial edges carry the data qubit as fault id; time edges carry none.
    Weights are scaled by ``n_layers * S + 1`` with ``+1`` on boundary edges,
    matching the tie-break of :func:`mwpm`.
    """

    def __init__(
        self,
        layout: PlanarCodeLayout,
        n_layers: int,
        spatial_weight: float = 1.0,
        time_weight: float = 1.0,
    ):
        import pymatching

        self.layout = layout
        self.n_layers = n_layers
        self._matchers = {}
        self._columns = {}
        self._scale = {}
        for kind in (Kind.STAR, Kind.PLAQUETTE):
            geo = kind_geometry(layout, kind)
            S = len(geo.stab_ids)
            scale = n_layers * S + 1
            ws, wt = scale * spatial_weight, scale * time_weight
            if max(ws, wt) + 1 > _PM_MAX_WEIGHT:
                raise ValueError(f"scaled edge weight {max(ws, wt) + 1} exceeds the PyMatching limit")
            m = pymatching.Matching()
            for t in range(n_layers):
                off = t * S
                for a, b, q in geo.edges:
                    m.add_edge(off + a, off + b, fault_ids={q}, weight=ws)
                for a, q in geo.boundary_edges:
                    m.add_boundary_edge(off + a, fault_ids={q}, weight=ws + 1, merge_strategy="keep-original")
                if t + 1 < n_layers:
                    for a in range(S):
                        m.add_edge(off + a, off + S + a, weight=wt)
            self._matchers[kind] = m
            self._columns[kind] = np.array(geo.stab_ids)
            self._scale[kind] = scale

    def decode_batch(self, events: np.ndarray, return_weights: bool = False):
        """Decode ``(batch, n_layers, n_stabilizers)`` detection events.

        Returns ``(z_correction, x_correction)`` as ``(batch, n_data)`` bool arrays,
        plus the per-kind unscaled matching weights when asked (exact for
        integer edge weights).
        """
        out, weights = [], []
        n_data = self.layout.n_data
        batch = events.shape[0]
        for kind in (Kind.STAR, Kind.PLAQUETTE):
            cols = self._columns[kind]
            shots = events[:, :, cols].reshape(batch, -1).astype(np.uint8)
            res = self._matchers[kind].decode_batch(shots, return_weights=return_weights)
            pred, w = res if return_weights else (res, None)
            corr = np.zeros((batch, n_data), dtype=bool)
            corr[:, : pred.shape[1]] = pred[:, :n_data].astype(bool)
            out.append(corr)
            if return_weights:
                weights.append(np.floor(w / self._scale[kind] + 1e-9))
        if return_weights:
            return out[0], out[1], weights[0], weights[1]
        return out[0], out[1]


@lru_cache(maxsize=32)
def space_time_matcher(
    layout: PlanarCodeLayout, n_layers: int, spatial_weight: float = 1.0, time_weight: float = 1.0
) -> SpaceTimeMatcher:
    return SpaceTimeMatcher(layout, n_layers, spatial_weight, time_weight)


def logical_failures_batch(
    layout: PlanarCodeLayout,
    final_x: np.ndarray,
    final_z: np.ndarray,
    corr_z: np.ndarray,
    corr_x: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`logical_failure` over ``(batch, n_data)`` arrays."""
    lz = list(layout.logical_z_support)
    lx = list(layout.logical_x_support)
    x_failed = np.bitwise_xor.reduce((final_x ^ corr_x)[:, lz], axis=1)
    z_failed = np.bitwise_xor.reduce((final_z ^ corr_z)[:, lx], axis=1)
    return x_failed, z_failed
