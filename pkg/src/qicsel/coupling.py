"""Undirected hardware coupling maps and bundled device topologies."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from .errors import InputError

Pair = tuple[int, int]

# 27-qubit Falcon heavy-hex device (FakeKolkata-style numbering).
HEAVY_HEX_27_EDGES: tuple[Pair, ...] = (
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10), (8, 9),
    (8, 11), (10, 12), (11, 14), (12, 13), (12, 15), (13, 14), (14, 16), (15, 18),
    (16, 19), (17, 18), (18, 21), (19, 20), (19, 22), (21, 23), (22, 25), (23, 24),
    (24, 25), (25, 26),
)


@dataclass(frozen=True)
class CouplingMap:
    num_qubits: int
    edges: frozenset[Pair]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        norm = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise InputError(f"self-loop on qubit {a}")
            if not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise InputError(f"edge ({a}, {b}) outside {self.num_qubits} qubits")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], num_qubits: int | None = None, name: str = "") -> CouplingMap:
        edges = [tuple(e) for e in edges]
        for e in edges:
            if len(e) != 2:
                raise InputError(f"edge {list(e)} must have two endpoints")
        if num_qubits is None:
            num_qubits = 1 + max((max(e) for e in edges), default=-1)
        seen = set()
        for a, b in edges:
            key = (min(a, b), max(a, b))
            if key in seen:
                raise InputError(f"duplicate edge {key}")
            seen.add(key)
        return cls(num_qubits, frozenset(edges), name)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.num_qubits)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return tuple(frozenset(s) for s in adj)

    def degree(self, q: int) -> int:
        return len(self.adjacency[q])

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def sorted_edges(self) -> list[Pair]:
        return sorted(self.edges)

    def to_dict(self) -> dict:
        return {"num_qubits": self.num_qubits, "edges": [list(e) for e in self.sorted_edges()]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> CouplingMap:
        try:
            return cls.from_edges(data["edges"], int(data["num_qubits"]), data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed coupling-map JSON: {exc}") from None


def heavy_hex_27() -> CouplingMap:
    return CouplingMap(27, frozenset(HEAVY_HEX_27_EDGES), "heavy-hex-27")


def heavy_hex_127() -> CouplingMap:
    """127-qubit Eagle heavy-hex device numbering.

    Seven rows of data qubits (14, 15, 15, 15, 15, 15, 14) joined by rows of four
    bridge qubits. Rows are indexed by column 0..14; the first row lacks column
    14 and the last lacks column 0. Bridges sit on columns 0,4,8,12 below even
    rows and 2,6,10,14 below odd rows.
    """
    row_cols = [range(0, 14)] + [range(0, 15)] * 5 + [range(1, 15)]
    ids: list[dict[int, int]] = []
    bridges: list[list[int]] = []
    next_id = 0
    for r, cols in enumerate(row_cols):
        ids.append({})
        for c in cols:
            ids[r][c] = next_id
            next_id += 1
        if r < len(row_cols) - 1:
            bridges.append(list(range(next_id, next_id + 4)))
            next_id += 4
    edges = []
    for r, row in enumerate(ids):
        cols = sorted(row)
        edges += [(row[c], row[c + 1]) for c in cols[:-1]]
    for r, bridge_ids in enumerate(bridges):
        bridge_cols = (0, 4, 8, 12) if r % 2 == 0 else (2, 6, 10, 14)
        for b, c in zip(bridge_ids, bridge_cols):
            edges += [(ids[r][c], b), (b, ids[r + 1][c])]
    return CouplingMap(next_id, frozenset(edges), "heavy-hex-127")


def line(n: int) -> CouplingMap:
    return CouplingMap(n, frozenset((i, i + 1) for i in range(n - 1)), f"line-{n}")


def cycle(n: int) -> CouplingMap:
    if n < 3:
        raise InputError("cycle needs at least 3 qubits")
    return CouplingMap(n, frozenset((i, (i + 1) % n) for i in range(n)), f"cycle-{n}")


def grid(rows: int, cols: int) -> CouplingMap:
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return CouplingMap(rows * cols, frozenset(edges), f"grid-{rows}x{cols}")


def fixture(name: str) -> CouplingMap:
    """Bundled map by name: ``heavy-hex-27``, ``heavy-hex-127``, ``line-N``, ``cycle-N``, ``grid-RxC``."""
    key = name.strip().lower()
    if key in ("heavy-hex-27", "kolkata", "falcon-27"):
        return heavy_hex_27()
    if key in ("heavy-hex-127", "eagle-127", "sherbrooke"):
        return heavy_hex_127()
    if m := re.fullmatch(r"line-(\d+)", key):
        return line(int(m.group(1)))
    if m := re.fullmatch(r"cycle-(\d+)", key):
        return cycle(int(m.group(1)))
    if m := re.fullmatch(r"grid-(\d+)x(\d+)", key):
        return grid(int(m.group(1)), int(m.group(2)))
    raise InputError(f"unknown coupling-map fixture {name!r}")


def load_coupling(spec: str) -> CouplingMap:
    """Fixture name or path to a coupling-map JSON file."""
    path = Path(spec)
    if path.is_file():
        try:
            return CouplingMap.from_dict(json.loads(path.read_text()))
        except json.JSONDecodeError as exc:
            raise InputError(f"{spec}: {exc}") from None
    return fixture(spec)
