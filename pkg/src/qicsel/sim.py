"""Noisy execution of QICs and Clifford circuits, and shot-histogram utilities."""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .circuit import UserCircuit
from .errors import InputError, SimulationError
from .noise import NoiseSnapshot
from .qic import Qic
from .stabilizer import Op, lower, reference_sample, sample_pauli_frames

# Shots are simulated in fixed chunks, each with its own seed, so the histogram
# does not depend on how many workers process the chunks.
CHUNK_SHOTS = 8192


@dataclass(frozen=True)
class ShotCounts:
    """Measured-bitstring histogram. ``qubits[i]`` labels bitstring position ``i``."""

    width: int
    counts: dict[str, int]
    shots: int
    qubits: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.qubits is None:
            object.__setattr__(self, "qubits", tuple(range(self.width)))
        else:
            object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) != self.width:
            raise InputError("qubit labels disagree with histogram width")
        for key, c in self.counts.items():
            if len(key) != self.width or set(key) - {"0", "1"}:
                raise InputError(f"bitstring {key!r} is not {self.width} bits wide")
            if c < 0:
                raise InputError("negative count")
        if sum(self.counts.values()) != self.shots:
            raise InputError(f"counts sum to {sum(self.counts.values())}, expected {self.shots} shots")

    def frequency(self, key: str) -> float:
        return self.counts.get(key, 0) / self.shots if self.shots else 0.0

    def scaled(self, factor: int) -> ShotCounts:
        return ShotCounts(self.width, {k: v * factor for k, v in self.counts.items()}, self.shots * factor, self.qubits)

    def to_dict(self) -> dict:
        d = {"width": self.width, "shots": self.shots, "counts": dict(sorted(self.counts.items()))}
        if self.qubits != tuple(range(self.width)):
            d["qubits"] = list(self.qubits)
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> ShotCounts:
        try:
            counts = {str(k): int(v) for k, v in data["counts"].items()}
            width = int(data.get("width", len(next(iter(counts))) if counts else 0))
            shots = int(data.get("shots", sum(counts.values())))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed counts JSON: {exc}") from None
        return cls(width, counts, shots, data.get("qubits"))


def marginalize(counts: ShotCounts, keep: Sequence[int]) -> ShotCounts:
    """Project onto the qubits ``keep`` (by label), in the order given."""
    keep = list(keep)
    if not keep:
        raise InputError("marginalize needs at least one qubit to keep")
    if len(set(keep)) != len(keep):
        raise InputError("marginalize qubits must be distinct")
    pos = {q: i for i, q in enumerate(counts.qubits)}
    missing = [q for q in keep if q not in pos]
    if missing:
        raise InputError(f"qubits {missing} are not in the histogram")
    idx = [pos[q] for q in keep]
    out: Counter[str] = Counter()
    for key, c in counts.counts.items():
        out["".join(key[i] for i in idx)] += c
    return ShotCounts(len(keep), dict(out), counts.shots, tuple(keep))


def _histogram(bits: np.ndarray) -> Counter:
    """Rows of a (shots, n) bool array -> Counter of '0'/'1' strings."""
    shots, n = bits.shape
    if n == 0:
        return Counter({"": shots})
    packed = np.packbits(bits, axis=1)
    rows = np.ascontiguousarray(packed).view(np.dtype((np.void, packed.shape[1]))).ravel()
    uniq, inverse_counts = np.unique(rows, return_counts=True)
    out: Counter[str] = Counter()
    for row, c in zip(uniq, inverse_counts):
        unpacked = np.unpackbits(np.frombuffer(row.tobytes(), dtype=np.uint8))[:n]
        out["".join("1" if b else "0" for b in unpacked)] += int(c)
    return out


def _noise_arrays(ops: Sequence[Op], labels: Sequence[int], noise: NoiseSnapshot) -> tuple[list[float], list[float]]:
    probs = []
    for op in ops:
        if len(op.qubits) == 1:
            probs.append(noise.one_qubit(labels[op.qubits[0]]))
        else:
            a, b = op.qubits
            probs.append(noise.two_qubit(labels[a], labels[b]))
    readout = [noise.readout(q) for q in labels]
    return probs, readout


def sample_ops(
    ops: Sequence[Op],
    num_qubits: int,
    error_probs: Sequence[float],
    readout_probs: Sequence[float],
    reference: np.ndarray,
    shots: int,
    seed: int,
    workers: int | None = None,
) -> Counter:
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    bounds = [(start, min(start + CHUNK_SHOTS, shots)) for start in range(0, shots, CHUNK_SHOTS)]

    def run_chunk(k: int) -> Counter:
        lo, hi = bounds[k]
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), k]))
        bits = sample_pauli_frames(ops, num_qubits, hi - lo, rng, error_probs, readout_probs, reference)
        return _histogram(bits)

    if workers and workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(len(bounds))))
    else:
        parts = [run_chunk(k) for k in range(len(bounds))]
    total: Counter[str] = Counter()
    for part in parts:
        total.update(part)
    return total


def run_qic(qic: Qic, noise: NoiseSnapshot, shots: int, seed: int = 0, workers: int | None = None) -> ShotCounts:
    """Execute ``qic`` (wires labelled by physical qubits) under ``noise``.

    Every wire is measured; bitstring position ``i`` is ``qic.qubits[i]``.
    """
    ops = lower(qic.to_circuit())
    probs, readout = _noise_arrays(ops, qic.qubits, noise)
    reference = np.zeros(qic.num_qubits, dtype=bool)
    counts = sample_ops(ops, qic.num_qubits, probs, readout, reference, shots, seed, workers)
    return ShotCounts(qic.num_qubits, dict(counts), shots, qic.qubits)


def run_circuit(
    circuit: UserCircuit,
    noise: NoiseSnapshot,
    shots: int,
    seed: int = 0,
    layout: Sequence[int] | None = None,
    workers: int | None = None,
) -> ShotCounts:
    """Execute a Clifford ``circuit`` with virtual qubit ``i`` on physical ``layout[i]``.

    Bitstring position ``i`` is virtual qubit ``i``. Rotations must be
    multiples of pi/2.
    """
    labels = tuple(layout) if layout is not None else tuple(range(circuit.num_qubits))
    if len(labels) != circuit.num_qubits:
        raise InputError("layout length differs from circuit width")
    ops = lower(circuit)
    probs, readout = _noise_arrays(ops, labels, noise)
    reference = reference_sample(circuit, np.random.default_rng(np.random.SeedSequence([int(seed), 1 << 30])))
    counts = sample_ops(ops, circuit.num_qubits, probs, readout, reference, shots, seed, workers)
    return ShotCounts(circuit.num_qubits, dict(counts), shots)
