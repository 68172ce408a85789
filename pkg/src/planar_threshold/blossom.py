"""Exact weighted matching on general graphs (Edmonds' blossom algorithm).

Primal-dual method with O(n^3) running time.  Vertex duals are stored
doubled so that integer edge weights keep all arithmetic integral; the
matching returned for integer weights is therefore exact, not merely within
a floating tolerance.

:func:`max_weight_matching` is the general solver.
:func:`min_weight_perfect_matching` reduces the minimum-cost perfect problem
to a maximum-cardinality maximum-weight one via ``w -> C - w``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Edge = tuple[int, int, float]


class NoPerfectMatching(ValueError):
    """The graph admits no perfect matching."""


class _Solver:
    # Edge k has endpoints 2k (its first vertex) and 2k + 1 (its second);
    # endpoint p ^ 1 is the other end of the same edge.  Blossom ids run from
    # n to 2n - 1; ids below n are trivial single-vertex blossoms.

    def __init__(self, n: int, edges: Sequence[Edge], max_cardinality: bool):
        self.n = n
        self.edges = edges
        self.max_cardinality = max_cardinality
        self.integral = all(isinstance(w, int) for _, _, w in edges)
        self.endpoint = [v for i, j, _ in edges for v in (i, j)]
        self.neighbend: list[list[int]] = [[] for _ in range(n)]
        for k, (i, j, _) in enumerate(edges):
            self.neighbend[i].append(2 * k + 1)
            self.neighbend[j].append(2 * k)

        top = max([0] + [w for _, _, w in edges])
        self.mate = [-1] * n
        self.label = [0] * (2 * n)
        self.labelend = [-1] * (2 * n)
        self.inblossom = list(range(n))
        self.parent = [-1] * (2 * n)
        self.childs: list[list[int] | None] = [None] * (2 * n)
        self.base = list(range(n)) + [-1] * n
        self.endps: list[list[int] | None] = [None] * (2 * n)
        self.bestedge = [-1] * (2 * n)
        self.bestedges: list[list[int] | None] = [None] * (2 * n)
        self.free_ids = list(range(n, 2 * n))
        self.dual = [top] * n + [0] * n
        self.allowed = [False] * len(edges)
        self.queue: list[int] = []

    def slack(self, k: int):
        i, j, w = self.edges[k]
        return self.dual[i] + self.dual[j] - 2 * w

    def leaves(self, b: int) -> Iterable[int]:
        if b < self.n:
            yield b
            return
        stack = [b]
        while stack:
            t = stack.pop()
            if t < self.n:
                yield t
            else:
                stack.extend(reversed(self.childs[t]))

    # Labelling ------------------------------------------------------------

    def assign_label(self, w: int, t: int, p: int) -> None:
        # Iterative form of: label w's blossom t; a T-blossom hands S to its mate.
        while True:
            b = self.inblossom[w]
            self.label[w] = self.label[b] = t
            self.labelend[w] = self.labelend[b] = p
            self.bestedge[w] = self.bestedge[b] = -1
            if t == 1:
                self.queue.extend(self.leaves(b))
                return
            mb = self.mate[self.base[b]]
            w, t, p = self.endpoint[mb], 1, mb ^ 1

    def scan_blossom(self, v: int, w: int) -> int:
        """Walk up both alternating trees; return the common base or -1."""
        label, labelend, endpoint, inblossom = self.label, self.labelend, self.endpoint, self.inblossom
        path = []
        found = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                found = self.base[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return found

    # Blossom construction and expansion ------------------------------------

    def add_blossom(self, base: int, k: int) -> None:
        v, w, _ = self.edges[k]
        inblossom, labelend, endpoint = self.inblossom, self.labelend, self.endpoint
        bb, bv, bw = inblossom[base], inblossom[v], inblossom[w]
        b = self.free_ids.pop()
        self.base[b] = base
        self.parent[b] = -1
        self.parent[bb] = b
        path: list[int] = []
        endps: list[int] = []
        while bv != bb:
            self.parent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.parent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        self.childs[b] = path
        self.endps[b] = endps
        self.label[b] = 1
        labelend[b] = labelend[bb]
        self.dual[b] = 0
        for leaf in self.leaves(b):
            if self.label[inblossom[leaf]] == 2:
                self.queue.append(leaf)
            inblossom[leaf] = b

        best_to = [-1] * (2 * self.n)
        for sub in path:
            if self.bestedges[sub] is None:
                lists = [[p // 2 for p in self.neighbend[leaf]] for leaf in self.leaves(sub)]
            else:
                lists = [self.bestedges[sub]]
            for lst in lists:
                for e in lst:
                    i, j, _ = self.edges[e]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if bj != b and self.label[bj] == 1 and (
                        best_to[bj] == -1 or self.slack(e) < self.slack(best_to[bj])
                    ):
                        best_to[bj] = e
            self.bestedges[sub] = None
            self.bestedge[sub] = -1
        self.bestedges[b] = [e for e in best_to if e != -1]
        self.bestedge[b] = -1
        for e in self.bestedges[b]:
            if self.bestedge[b] == -1 or self.slack(e) < self.slack(self.bestedge[b]):
                self.bestedge[b] = e

    def expand_blossom(self, b: int, endstage: bool) -> None:
        n, label, labelend, endpoint, inblossom = self.n, self.label, self.labelend, self.endpoint, self.inblossom
        for s in self.childs[b]:
            self.parent[s] = -1
            if s < n:
                inblossom[s] = s
            elif endstage and self.dual[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for leaf in self.leaves(s):
                    inblossom[leaf] = s

        if not endstage and label[b] == 2:
            # Relabel the sub-blossoms on the even-length path from the
            # entry child back to the base; the rest become unlabelled.
            childs, endps = self.childs[b], self.endps[b]
            entry = inblossom[endpoint[labelend[b] ^ 1]]
            j = childs.index(entry)
            if j & 1:
                j -= len(childs)
                step, trick = 1, 0
            else:
                step, trick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[j - trick] ^ trick ^ 1]] = 0
                self.assign_label(endpoint[p ^ 1], 2, p)
                self.allowed[endps[j - trick] // 2] = True
                j += step
                p = endps[j - trick] ^ trick
                self.allowed[p // 2] = True
                j += step
            bv = childs[j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            self.bestedge[bv] = -1
            j += step
            while childs[j] != entry:
                bv = childs[j]
                if label[bv] == 1:
                    j += step
                    continue
                reached = -1
                for leaf in self.leaves(bv):
                    if label[leaf] != 0:
                        reached = leaf
                        break
                if reached != -1:
                    label[reached] = 0
                    label[endpoint[self.mate[self.base[bv]]]] = 0
                    self.assign_label(reached, 2, labelend[reached])
                j += step

        label[b] = labelend[b] = -1
        self.childs[b] = self.endps[b] = None
        self.base[b] = -1
        self.bestedges[b] = None
        self.bestedge[b] = -1
        self.free_ids.append(b)

    # Augmentation --------------------------------------------------------

    def augment_blossom(self, b: int, v: int) -> None:
        """Swap matched/unmatched edges inside ``b`` so that ``v`` becomes its base."""
        n, endpoint = self.n, self.endpoint
        t = v
        while self.parent[t] != b:
            t = self.parent[t]
        if t >= n:
            self.augment_blossom(t, v)
        childs, endps = self.childs[b], self.endps[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            step, trick = 1, 0
        else:
            step, trick = -1, 1
        while j != 0:
            j += step
            t = childs[j]
            p = endps[j - trick] ^ trick
            if t >= n:
                self.augment_blossom(t, endpoint[p])
            j += step
            t = childs[j]
            if t >= n:
                self.augment_blossom(t, endpoint[p ^ 1])
            self.mate[endpoint[p]] = p ^ 1
            self.mate[endpoint[p ^ 1]] = p
        self.childs[b] = childs[i:] + childs[:i]
        self.endps[b] = endps[i:] + endps[:i]
        self.base[b] = self.base[self.childs[b][0]]

    def augment_matching(self, k: int) -> None:
        v, w, _ = self.edges[k]
        n, endpoint, inblossom, labelend = self.n, self.endpoint, self.inblossom, self.labelend
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= n:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= n:
                    self.augment_blossom(bt, j)
                self.mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    # Main loop -------------------------------------------------------------

    def _grow(self) -> bool:
        """Scan queued S-vertices; True once an augmenting path was applied."""
        label, inblossom, endpoint = self.label, self.inblossom, self.endpoint
        while self.queue:
            v = self.queue.pop()
            for p in self.neighbend[v]:
                k = p // 2
                w = endpoint[p]
                if inblossom[v] == inblossom[w]:
                    continue
                if not self.allowed[k]:
                    kslack = self.slack(k)
                    if kslack <= 0:
                        self.allowed[k] = True
                if self.allowed[k]:
                    if label[inblossom[w]] == 0:
                        self.assign_label(w, 2, p ^ 1)
                    elif label[inblossom[w]] == 1:
                        found = self.scan_blossom(v, w)
                        if found >= 0:
                            self.add_blossom(found, k)
                        else:
                            self.augment_matching(k)
                            return True
                    elif label[w] == 0:
                        label[w] = 2
                        self.labelend[w] = p ^ 1
                elif label[inblossom[w]] == 1:
                    b = inblossom[v]
                    if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                        self.bestedge[b] = k
                elif label[w] == 0:
                    if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                        self.bestedge[w] = k
        return False

    def _dual_step(self) -> bool:
        """Adjust duals by the largest safe delta; False when the stage is over."""
        n, label, inblossom, dual = self.n, self.label, self.inblossom, self.dual
        kind, delta, edge, blossom = -1, None, -1, -1
        if not self.max_cardinality:
            kind, delta = 1, min(dual[:n])
        for v in range(n):
            if label[inblossom[v]] == 0 and self.bestedge[v] != -1:
                d = self.slack(self.bestedge[v])
                if kind == -1 or d < delta:
                    kind, delta, edge = 2, d, self.bestedge[v]
        for b in range(2 * n):
            if self.parent[b] == -1 and label[b] == 1 and self.bestedge[b] != -1:
                s = self.slack(self.bestedge[b])
                d = s // 2 if self.integral else s / 2
                if kind == -1 or d < delta:
                    kind, delta, edge = 3, d, self.bestedge[b]
        for b in range(n, 2 * n):
            if self.base[b] >= 0 and self.parent[b] == -1 and label[b] == 2 and (kind == -1 or dual[b] < delta):
                kind, delta, blossom = 4, dual[b], b
        if kind == -1:
            # Maximum cardinality reached; finish with a plain vertex-dual step.
            kind, delta = 1, max(0, min(dual[:n]))

        for v in range(n):
            lab = label[inblossom[v]]
            if lab == 1:
                dual[v] -= delta
            elif lab == 2:
                dual[v] += delta
        for b in range(n, 2 * n):
            if self.base[b] >= 0 and self.parent[b] == -1:
                if label[b] == 1:
                    dual[b] += delta
                elif label[b] == 2:
                    dual[b] -= delta

        if kind == 1:
            return False
        if kind == 2:
            self.allowed[edge] = True
            i, j, _ = self.edges[edge]
            if label[inblossom[i]] == 0:
                i, j = j, i
            self.queue.append(i)
        elif kind == 3:
            self.allowed[edge] = True
            i, _, _ = self.edges[edge]
            self.queue.append(i)
        else:
            self.expand_blossom(blossom, False)
        return True

    def solve(self) -> list[int]:
        n = self.n
        for _ in range(n):
            self.label = [0] * (2 * n)
            self.bestedge = [-1] * (2 * n)
            for b in range(n, 2 * n):
                self.bestedges[b] = None
            self.allowed = [False] * len(self.edges)
            self.queue = []
            for v in range(n):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                if self._grow():
                    augmented = True
                    break
                if not self._dual_step():
                    break
            if not augmented:
                break
            for b in range(n, 2 * n):
                if self.parent[b] == -1 and self.base[b] >= 0 and self.label[b] == 1 and self.dual[b] == 0:
                    self.expand_blossom(b, True)
        return [self.endpoint[m] if m >= 0 else -1 for m in self.mate]


def _validate(n: int, edges: Sequence[Edge]) -> None:
    seen = set()
    for i, j, _ in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) references a vertex outside 0..{n - 1}")
        if i == j:
            raise ValueError(f"self-loop on vertex {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"parallel edge between {i} and {j}")
        seen.add(key)


def max_weight_matching(n: int, edges: Sequence[Edge], max_cardinality: bool = False) -> list[int]:
    """Maximum-weight matching; returns ``mate`` with ``mate[v] = -1`` if unmatched.

    With ``max_cardinality`` the weight is maximised among matchings of
    maximum size.
    """
    edges = list(edges)
    _validate(n, edges)
    if not edges:
        return [-1] * n
    return _Solver(n, edges, max_cardinality).solve()


def min_weight_perfect_matching(n: int, edges: Sequence[Edge]) -> list[tuple[int, int]]:
    """Perfect matching of minimum total weight as sorted ``(u, v)`` pairs, ``u < v``.

    Raises :class:`NoPerfectMatching` if none exists.
    """
    if n % 2:
        raise NoPerfectMatching(f"odd number of vertices ({n})")
    if n == 0:
        return []
    edges = list(edges)
    for _, _, w in edges:
        if w < 0:
            raise ValueError(f"negative edge weight {w}")
    top = max(w for _, _, w in edges) if edges else 0
    shift = top + 1
    flipped = [(i, j, shift - w) for i, j, w in edges]
    mate = max_weight_matching(n, flipped, max_cardinality=True)
    if any(m == -1 for m in mate):
        raise NoPerfectMatching("graph admits no perfect matching")
    return sorted((v, m) for v, m in enumerate(mate) if v < m)
