"""Clifford simulation primitives.

* :class:`Tableau` is an Aaronson-Gottesman stabilizer tableau, used to obtain
  one noiseless reference sample and to check deterministic outcomes.
* :func:`sample_pauli_frames` propagates random Pauli error frames for many
  shots at once. Outcomes are the reference sample XOR the frames' X part.
  Frames start with a uniformly random Z component so that non-deterministic
  measurements are sampled correctly as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import GateKind, UserCircuit
from .errors import NonCliffordError

# Primitive op names after lowering.
ONE_QUBIT_OPS = ("I", "H", "X", "Z", "S", "SX")
TWO_QUBIT_OPS = ("CX", "CZ")


@dataclass(frozen=True)
class Op:
    name: str
    qubits: tuple[int, ...]
    quarter_turns: int = 0  # for S / SX, 0..3


def _quarter_turns(theta: float) -> int:
    k = theta / (math.pi / 2)
    kr = round(k)
    if abs(k - kr) > 1e-9:
        raise NonCliffordError(f"rotation angle {theta} is not a multiple of pi/2")
    return int(kr) % 4


def lower(circuit: UserCircuit) -> list[Op]:
    """Rewrite a Clifford circuit as primitive ops, one noise location per op.

    RZZ becomes CX, RZ(target), CX and SWAP becomes three CX; MEASURE-ALL is
    dropped because every wire is measured at the end.
    """
    ops: list[Op] = []
    for g in circuit.gates:
        k = g.kind
        if k is GateKind.MEASURE_ALL:
            continue
        if k is GateKind.H:
            ops.append(Op("H", g.qubits))
        elif k is GateKind.X:
            ops.append(Op("X", g.qubits))
        elif k is GateKind.Z:
            ops.append(Op("Z", g.qubits))
        elif k is GateKind.RZ:
            ops.append(Op("S", g.qubits, _quarter_turns(g.param)))
        elif k is GateKind.RX:
            ops.append(Op("SX", g.qubits, _quarter_turns(g.param)))
        elif k is GateKind.CX:
            ops.append(Op("CX", g.qubits))
        elif k is GateKind.CZ:
            ops.append(Op("CZ", g.qubits))
        elif k is GateKind.SWAP:
            a, b = g.qubits
            ops += [Op("CX", (a, b)), Op("CX", (b, a)), Op("CX", (a, b))]
        elif k is GateKind.RZZ:
            a, b = g.qubits
            ops += [Op("CX", (a, b)), Op("S", (b,), _quarter_turns(g.param)), Op("CX", (a, b))]
        else:  # pragma: no cover - enum is closed
            raise NonCliffordError(f"cannot lower {k}")
    return ops


class Tableau:
    """Stabilizer tableau over ``n`` qubits, initialised to |0...0>."""

    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((2 * n + 1, n), dtype=bool)
        self.z = np.zeros((2 * n + 1, n), dtype=bool)
        self.r = np.zeros(2 * n + 1, dtype=bool)
        idx = np.arange(n)
        self.x[idx, idx] = True
        self.z[idx + n, idx] = True

    def h(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        xa = self.x[:, a].copy()
        self.x[:, a] = self.z[:, a]
        self.z[:, a] = xa

    def s(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def cx(self, a: int, b: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, b] & ~(self.x[:, b] ^ self.z[:, a])
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def pauli_x(self, a: int) -> None:
        self.r ^= self.z[:, a]

    def pauli_z(self, a: int) -> None:
        self.r ^= self.x[:, a]

    def apply(self, op: Op) -> None:
        name, q = op.name, op.qubits
        if name == "H":
            self.h(q[0])
        elif name == "X":
            self.pauli_x(q[0])
        elif name == "Z":
            self.pauli_z(q[0])
        elif name == "S":
            for _ in range(op.quarter_turns):
                self.s(q[0])
        elif name == "SX":
            self.h(q[0])
            for _ in range(op.quarter_turns):
                self.s(q[0])
            self.h(q[0])
        elif name == "CX":
            self.cx(*q)
        elif name == "CZ":
            self.h(q[1])
            self.cx(*q)
            self.h(q[1])
        elif name != "I":
            raise NonCliffordError(f"unknown op {name}")

    def _rowsum(self, h: int, i: int) -> None:
        x1, z1 = self.x[i].astype(np.int8), self.z[i].astype(np.int8)
        x2, z2 = self.x[h].astype(np.int8), self.z[h].astype(np.int8)
        g = np.where(
            (x1 == 1) & (z1 == 1),
            z2 - x2,
            np.where((x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1), np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0)),
        )
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(g.sum())
        self.r[h] = (total % 4) == 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def is_deterministic(self, a: int) -> bool:
        n = self.n
        return not self.x[n : 2 * n, a].any()

    def measure(self, a: int, rng: np.random.Generator | None = None) -> int:
        n = self.n
        stab = np.flatnonzero(self.x[n : 2 * n, a])
        if stab.size:
            p = int(stab[0]) + n
            for i in np.flatnonzero(self.x[: 2 * n, a]):
                if i != p:
                    self._rowsum(int(i), p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = False
            self.z[p] = False
            self.z[p, a] = True
            outcome = int(rng.integers(2)) if rng is not None else 0
            self.r[p] = bool(outcome)
            return outcome
        scratch = 2 * n
        self.x[scratch] = False
        self.z[scratch] = False
        self.r[scratch] = False
        for i in np.flatnonzero(self.x[:n, a]):
            self._rowsum(scratch, int(i) + n)
        return int(self.r[scratch])


def run_tableau(circuit: UserCircuit) -> Tableau:
    t = Tableau(circuit.num_qubits)
    for op in lower(circuit):
        t.apply(op)
    return t


def reference_sample(circuit: UserCircuit, rng: np.random.Generator | None = None) -> np.ndarray:
    """One noiseless measurement record of every qubit (random branches resolved by ``rng``)."""
    t = run_tableau(circuit)
    return np.array([t.measure(q, rng) for q in range(circuit.num_qubits)], dtype=bool)


def is_identity_witness(circuit: UserCircuit) -> bool:
    """True iff measuring every qubit after ``circuit`` deterministically yields all zeros."""
    t = run_tableau(circuit)
    for q in range(circuit.num_qubits):
        if not t.is_deterministic(q) or t.measure(q) != 0:
            return False
    return True


# Pauli code: 0=I, 1=X, 2=Y, 3=Z.
_X_BIT = np.array([False, True, True, False])
_Z_BIT = np.array([False, False, True, True])


def sample_pauli_frames(
    ops: Sequence[Op],
    num_qubits: int,
    shots: int,
    rng: np.random.Generator,
    error_probs: Sequence[float],
    readout_probs: Sequence[float],
    reference: np.ndarray,
) -> np.ndarray:
    """Sample measurement records under depolarizing + readout-flip noise.

    ``error_probs[k]`` is the depolarizing probability applied after ``ops[k]``
    (uniform over the 3 or 15 non-identity Paulis). Returns a ``(shots, n)``
    boolean array.
    """
    n = num_qubits
    x = np.zeros((n, shots), dtype=bool)
    z = rng.integers(0, 2, size=(n, shots), dtype=np.int8).astype(bool)
    for op, p in zip(ops, error_probs):
        q = op.qubits
        name = op.name
        if name == "H":
            tmp = x[q[0]].copy()
            x[q[0]] = z[q[0]]
            z[q[0]] = tmp
        elif name == "S":
            if op.quarter_turns % 2:
                z[q[0]] ^= x[q[0]]
        elif name == "SX":
            if op.quarter_turns % 2:
                x[q[0]] ^= z[q[0]]
        elif name == "CX":
            a, b = q
            x[b] ^= x[a]
            z[a] ^= z[b]
        elif name == "CZ":
            a, b = q
            z[a] ^= x[b]
            z[b] ^= x[a]
        if p <= 0.0:
            continue
        hit = np.flatnonzero(rng.random(shots) < p)
        if not hit.size:
            continue
        if len(q) == 1:
            code = rng.integers(1, 4, size=hit.size)
            x[q[0], hit] ^= _X_BIT[code]
            z[q[0], hit] ^= _Z_BIT[code]
        else:
            code = rng.integers(1, 16, size=hit.size)
            ca, cb = code >> 2, code & 3
            x[q[0], hit] ^= _X_BIT[ca]
            z[q[0], hit] ^= _Z_BIT[ca]
            x[q[1], hit] ^= _X_BIT[cb]
            z[q[1], hit] ^= _Z_BIT[cb]
    pm = np.asarray(readout_probs, dtype=float)
    flips = rng.random((n, shots)) < pm[:, None]
    bits = x ^ flips ^ np.asarray(reference, dtype=bool)[:, None]
    return bits.T
