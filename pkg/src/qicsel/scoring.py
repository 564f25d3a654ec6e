"""Layout scores: QIC scores from shot histograms and the calibration-based
Mapomatic score."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import GateKind, UserCircuit
from .errors import InputError
from .noise import NoiseSnapshot
from .qic import Qic
from .sim import ShotCounts


@dataclass(frozen=True)
class LayoutScore:
    layout: tuple[int, ...]
    qic_score_counts: float
    qic_score_zz: float
    mapomatic_score: float
    shots: int
    set_index: int = 0

    def to_dict(self) -> dict:
        return {
            "layout": list(self.layout),
            "qic_score_counts": self.qic_score_counts,
            "qic_score_zz": self.qic_score_zz,
            "mapomatic_score": self.mapomatic_score,
            "shots": self.shots,
            "set_index": self.set_index,
        }


def qic_score_counts(counts: ShotCounts) -> float:
    """Fraction of shots that returned the all-zeros outcome."""
    if counts.shots < 1:
        raise InputError("histogram has no shots")
    return counts.counts.get("0" * counts.width, 0) / counts.shots


def qic_score_zz(counts: ShotCounts, ordering: Sequence[int] | None = None) -> float:
    """Mean nearest-neighbour ZZ parity, ``1/(n-1) * sum_i <Z_i Z_{i+1}>``.

    ``ordering[i]`` is the bitstring position of chain element ``i``; the
    default chain is the bitstring order itself.
    """
    order = list(range(counts.width)) if ordering is None else list(ordering)
    if len(order) < 2:
        raise InputError("ZZ score needs at least two qubits")
    if any(not 0 <= p < counts.width for p in order):
        raise InputError(f"ordering {order} references positions outside width {counts.width}")
    total = 0.0
    for key, c in counts.counts.items():
        agree = sum(1 if key[a] == key[b] else -1 for a, b in zip(order, order[1:]))
        total += c * agree
    return total / ((len(order) - 1) * counts.shots)


def mapomatic_score(layout: Sequence[int], qic: Qic, noise: NoiseSnapshot) -> float:
    """``1 - prod(1 - e)`` over every gate of ``qic`` placed on ``layout`` and every
    measured qubit. Lower is better."""
    if len(layout) != qic.num_qubits:
        raise InputError(f"layout has {len(layout)} qubits, QIC has {qic.num_qubits}")
    phys = dict(zip(qic.qubits, layout))
    success = 1.0
    for q in layout:
        success *= (1.0 - noise.one_qubit(q)) ** 2 * (1.0 - noise.readout(q))
    for (a, b), c in qic.pair_counts.items():
        success *= (1.0 - noise.two_qubit(phys[a], phys[b])) ** c
    return 1.0 - success


def mapomatic_score_circuit(layout: Sequence[int], circuit: UserCircuit, noise: NoiseSnapshot) -> float:
    """Same product taken over the user circuit (RZZ as CX-RZ-CX, SWAP as three CX)."""
    if len(layout) != circuit.num_qubits:
        raise InputError("layout length differs from circuit width")
    success = 1.0
    for g in circuit.gates:
        if g.kind is GateKind.MEASURE_ALL:
            continue
        if g.is_two_qubit:
            e2 = 1.0 - noise.two_qubit(layout[g.qubits[0]], layout[g.qubits[1]])
            if g.kind is GateKind.RZZ:
                success *= e2**2 * (1.0 - noise.one_qubit(layout[g.qubits[1]]))
            elif g.kind is GateKind.SWAP:
                success *= e2**3
            else:
                success *= e2
        else:
            success *= 1.0 - noise.one_qubit(layout[g.qubits[0]])
    for q in layout:
        success *= 1.0 - noise.readout(q)
    return 1.0 - success


@dataclass(frozen=True)
class BootstrapResult:
    counts_scores: list[float]
    zz_scores: list[float] = field(default_factory=list)

    @property
    def counts_mean(self) -> float:
        return float(np.mean(self.counts_scores))

    @property
    def counts_std(self) -> float:
        return float(np.std(self.counts_scores, ddof=1))

    @property
    def zz_mean(self) -> float:
        return float(np.mean(self.zz_scores)) if self.zz_scores else float("nan")

    @property
    def zz_std(self) -> float:
        return float(np.std(self.zz_scores, ddof=1)) if self.zz_scores else float("nan")

    def to_dict(self) -> dict:
        return {
            "qic_score_counts": {"mean": self.counts_mean, "std": self.counts_std, "samples": self.counts_scores},
            "qic_score_zz": {"mean": self.zz_mean, "std": self.zz_std, "samples": self.zz_scores},
        }


def bootstrap_scores(
    counts: ShotCounts, resamples: int = 10, seed: int | None = 0, ordering: Sequence[int] | None = None
) -> BootstrapResult:
    """Multinomial resampling of the histogram at its own shot count."""
    if resamples < 2:
        raise InputError("bootstrap needs at least 2 resamples")
    keys = list(counts.counts)
    probs = np.array([counts.counts[k] for k in keys], dtype=float) / counts.shots
    rng = np.random.default_rng(seed)
    with_zz = counts.width >= 2
    c_scores, z_scores = [], []
    for _ in range(resamples):
        draw = rng.multinomial(counts.shots, probs)
        sample = ShotCounts(counts.width, {k: int(n) for k, n in zip(keys, draw) if n}, counts.shots, counts.qubits)
        c_scores.append(qic_score_counts(sample))
        if with_zz:
            z_scores.append(qic_score_zz(sample, ordering))
    return BootstrapResult(c_scores, z_scores)
