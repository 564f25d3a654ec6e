"""Quality Indicator Circuits: a Hadamard layer, a CNOT network that mirrors the
user circuit's two-qubit interaction pattern, and a closing Hadamard layer.

The noiseless outcome of any such circuit is the all-zeros bitstring, so the
all-zeros frequency observed on hardware indicates how noisy a layout is.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .circuit import Gate, GateKind, UserCircuit
from .errors import InputError

Pair = tuple[int, int]
PairCounts = dict[Pair, int]
Layer = tuple[Pair, ...]


class DegenerateQicWarning(UserWarning):
    """The circuit has no two-qubit gates; the QIC reduces to H;H per qubit."""


def _sorted_pair(a: int, b: int) -> Pair:
    if a == b:
        raise InputError(f"pair needs distinct qubits, got ({a}, {b})")
    return (a, b) if a < b else (b, a)


def schedule_layers(pair_counts: Mapping[Pair, int], num_qubits: int | None = None) -> list[Layer]:
    """Pack the CNOT multiset into levels where no qubit is used twice.

    First-fit: each CNOT (pairs in insertion order, copies consecutive) lands in
    the earliest level where both endpoints are free. This is greedy edge
    colouring, so the level count is at most ``2 * max_degree - 1``.
    """
    busy: list[set[int]] = []
    layers: list[list[Pair]] = []
    for pair, count in pair_counts.items():
        a, b = pair
        if num_qubits is not None and not (0 <= a < num_qubits and 0 <= b < num_qubits):
            raise InputError(f"pair {pair} outside {num_qubits} qubits")
        start = 0
        for _ in range(count):
            level = start
            while level < len(layers) and (a in busy[level] or b in busy[level]):
                level += 1
            if level == len(layers):
                layers.append([])
                busy.append(set())
            layers[level].append(pair)
            busy[level].update(pair)
            start = level + 1
    return [tuple(layer) for layer in layers]


@dataclass(frozen=True, eq=True)
class Qic:
    """A QIC on an ordered set of wires.

    ``qubits`` holds the wire labels: ``0..n-1`` for a QIC built from a user
    circuit, physical qubit indices once placed on a layout. Bitstring position
    ``i`` of a measured outcome corresponds to ``qubits[i]``.
    """

    qubits: tuple[int, ...]
    pair_counts: PairCounts
    layers: tuple[Layer, ...]
    degenerate: bool = False

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    def ideal_outcome(self) -> str:
        return "0" * self.num_qubits

    @property
    def cnot_count(self) -> int:
        return sum(self.pair_counts.values())

    @property
    def two_qubit_depth(self) -> int:
        return len(self.layers)

    @classmethod
    def from_pairs(cls, qubits: Iterable[int], pair_counts: Mapping[Pair, int]) -> Qic:
        qubits = tuple(qubits)
        wires = set(qubits)
        counts: PairCounts = {}
        for (a, b), c in pair_counts.items():
            if c < 1:
                continue
            pair = _sorted_pair(a, b)
            if pair[0] not in wires or pair[1] not in wires:
                raise InputError(f"pair {pair} not on QIC wires")
            counts[pair] = counts.get(pair, 0) + int(c)
        return cls(qubits, counts, tuple(schedule_layers(counts)), degenerate=not counts)

    def endpoint_counts(self) -> dict[int, int]:
        """Number of CNOTs touching each wire."""
        out = {q: 0 for q in self.qubits}
        for (a, b), c in self.pair_counts.items():
            out[a] += c
            out[b] += c
        return out

    def on_layout(self, layout: Sequence[int]) -> Qic:
        """Relabel a virtual QIC onto physical qubits; ``layout[i]`` hosts virtual ``i``."""
        if len(layout) != self.num_qubits:
            raise InputError(f"layout has {len(layout)} qubits, QIC has {self.num_qubits}")
        if len(set(layout)) != len(layout):
            raise InputError(f"layout {list(layout)} repeats a physical qubit")
        index = {v: i for i, v in enumerate(self.qubits)}
        mapped = {
            _sorted_pair(layout[index[a]], layout[index[b]]): c for (a, b), c in self.pair_counts.items()
        }
        return Qic.from_pairs(sorted(layout), mapped)

    def to_circuit(self) -> UserCircuit:
        """Gate-level form on positional wires ``0..n-1`` (position i is ``qubits[i]``)."""
        pos = {q: i for i, q in enumerate(self.qubits)}
        n = self.num_qubits
        gates = [Gate(GateKind.H, (i,)) for i in range(n)]
        for layer in self.layers:
            gates += [Gate(GateKind.CX, (pos[a], pos[b])) for a, b in layer]
        gates += [Gate(GateKind.H, (i,)) for i in range(n)]
        return UserCircuit(n, tuple(gates))

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "qubits": list(self.qubits),
            "pairs": [[a, b, c] for (a, b), c in self.pair_counts.items()],
            "layers": [[[a, b] for a, b in layer] for layer in self.layers],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> Qic:
        try:
            n = int(data["num_qubits"])
            qubits = tuple(data.get("qubits", range(n)))
            pairs = {(int(a), int(b)): int(c) for a, b, c in data["pairs"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed QIC JSON: {exc}") from None
        if len(qubits) != n:
            raise InputError("QIC 'qubits' length disagrees with 'num_qubits'")
        qic = cls.from_pairs(qubits, pairs)
        if "layers" in data:
            layers = tuple(tuple(_sorted_pair(int(a), int(b)) for a, b in layer) for layer in data["layers"])
            flat: PairCounts = {}
            for layer in layers:
                if len({q for p in layer for q in p}) != 2 * len(layer):
                    raise InputError("QIC layer uses a qubit twice")
                for p in layer:
                    flat[p] = flat.get(p, 0) + 1
            if flat != dict(qic.pair_counts):
                raise InputError("QIC layers do not reproduce its pair counts")
            qic = cls(qic.qubits, qic.pair_counts, layers, qic.degenerate)
        return qic


def pair_census(circuit: UserCircuit) -> PairCounts:
    """Count two-qubit gates per unordered qubit pair, in first-seen order."""
    counts: PairCounts = {}
    for g in circuit.gates:
        if g.is_two_qubit:
            pair = _sorted_pair(*g.qubits)
            counts[pair] = counts.get(pair, 0) + 1
    return counts


def build_qic(circuit: UserCircuit) -> Qic:
    """Build the QIC of ``circuit``.

    Pair counts are divided by the smallest count and rounded up. A circuit
    without two-qubit gates yields an H;H-only QIC and a
    :class:`DegenerateQicWarning`.
    """
    counts = pair_census(circuit)
    if not counts:
        warnings.warn(
            "circuit has no two-qubit gates; QIC only probes SPAM and single-qubit noise",
            DegenerateQicWarning,
            stacklevel=2,
        )
        return Qic(tuple(range(circuit.num_qubits)), {}, (), degenerate=True)
    min_count = min(counts.values())
    reduced = {pair: math.ceil(c / min_count) for pair, c in counts.items()}
    return Qic(tuple(range(circuit.num_qubits)), reduced, tuple(schedule_layers(reduced, circuit.num_qubits)))


def qic_is_identity_witness(qic: Qic) -> bool:
    """True iff the noiseless QIC maps |0...0> to |0...0> (checked by stabilizer simulation)."""
    from .stabilizer import is_identity_witness

    return is_identity_witness(qic.to_circuit())
