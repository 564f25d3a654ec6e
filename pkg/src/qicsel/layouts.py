"""Enumeration of isomorphic layouts and layout disjointness checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .coupling import CouplingMap
from .qic import Qic

Layout = tuple[int, ...]


@dataclass(frozen=True)
class InteractionGraph:
    """Pattern graph of a QIC: vertices are virtual qubits, one edge per pair key."""

    num_vertices: int
    edges: frozenset[tuple[int, int]]

    def neighbours(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def interaction_graph(qic: Qic) -> InteractionGraph:
    pos = {q: i for i, q in enumerate(qic.qubits)}
    edges = frozenset((pos[a], pos[b]) for a, b in qic.pair_counts)
    return InteractionGraph(qic.num_qubits, edges)


def _search_order(adj: list[set[int]]) -> list[int]:
    """Visit vertices so that each one (after the first of its component) has an
    already-placed neighbour; start components at their highest-degree vertex."""
    n = len(adj)
    order: list[int] = []
    placed = [False] * n
    remaining = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    for root in remaining:
        if placed[root]:
            continue
        placed[root] = True
        order.append(root)
        while True:
            best = None
            for v in order:
                for u in adj[v]:
                    if not placed[u] and (best is None or (len(adj[u]), -u) > (len(adj[best]), -best)):
                        best = u
            if best is None:
                break
            placed[best] = True
            order.append(best)
    return order


def find_isomorphic_layouts(pattern: InteractionGraph, cmap: CouplingMap) -> list[Layout]:
    """All injective maps of ``pattern`` into ``cmap`` that send edges to edges.

    VF2-style depth-first search with degree pruning. Distinct ordered tuples
    are distinct layouts, so a path and its reversal both appear. The result is
    sorted lexicographically.
    """
    n = pattern.num_vertices
    if n == 0:
        return [()]
    if n > cmap.num_qubits:
        return []
    adj = pattern.neighbours()
    hw = cmap.adjacency
    order = _search_order(adj)
    # For each step, the pattern neighbours already mapped at that point.
    earlier: list[list[int]] = []
    seen: set[int] = set()
    for v in order:
        earlier.append([u for u in adj[v] if u in seen])
        seen.add(v)
    degree = [len(a) for a in adj]
    mapping = [-1] * n
    used = [False] * cmap.num_qubits
    results: list[Layout] = []

    def extend(depth: int) -> None:
        if depth == n:
            results.append(tuple(mapping))
            return
        v = order[depth]
        back = earlier[depth]
        if back:
            candidates: Iterable[int] = hw[mapping[back[0]]]
        else:
            candidates = range(cmap.num_qubits)
        for p in candidates:
            if used[p] or len(hw[p]) < degree[v]:
                continue
            if any(mapping[u] not in hw[p] for u in back[1:]):
                continue
            mapping[v] = p
            used[p] = True
            extend(depth + 1)
            used[p] = False
        mapping[v] = -1

    extend(0)
    results.sort()
    return results


def is_valid_layout(layout: Sequence[int], pattern: InteractionGraph, cmap: CouplingMap) -> bool:
    if len(layout) != pattern.num_vertices or len(set(layout)) != len(layout):
        return False
    if any(not 0 <= p < cmap.num_qubits for p in layout):
        return False
    return all(cmap.has_edge(layout[a], layout[b]) for a, b in pattern.edges)


def is_layout_disjoint_with_set(layouts: Iterable[Sequence[int]], candidate: Sequence[int]) -> bool:
    """True iff ``candidate`` shares no physical qubit with any layout in ``layouts``."""
    cand = set(candidate)
    return all(cand.isdisjoint(l) for l in layouts)
