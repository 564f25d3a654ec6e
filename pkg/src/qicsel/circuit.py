"""Gate-list circuit representation, JSON (de)serialization and fixture generators.

Bitstrings throughout the package use a left-origin convention: character ``i``
of a measured bitstring is qubit ``i``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import CircuitParseError, InputError, QubitRangeError, UnsupportedGateError


class GateKind(str, Enum):
    H = "H"
    X = "X"
    Z = "Z"
    RX = "RX"
    RZ = "RZ"
    CX = "CX"
    CZ = "CZ"
    RZZ = "RZZ"
    SWAP = "SWAP"
    MEASURE_ALL = "MEASURE-ALL"


TWO_QUBIT = frozenset({GateKind.CX, GateKind.CZ, GateKind.RZZ, GateKind.SWAP})
PARAMETRIC = frozenset({GateKind.RX, GateKind.RZ, GateKind.RZZ})
SELF_INVERSE = frozenset({GateKind.H, GateKind.X, GateKind.Z, GateKind.CX, GateKind.CZ, GateKind.SWAP})

# CNOT time-steps per gate when measuring 2-qubit depth.
CNOT_STEPS = {GateKind.RZZ: 2, GateKind.SWAP: 3}


def gate_kind(name: str) -> GateKind:
    key = name.strip().upper().replace("_", "-")
    if key in ("CNOT",):
        key = "CX"
    if key in ("MEASURE", "MEASUREALL"):
        key = "MEASURE-ALL"
    try:
        return GateKind(key)
    except ValueError:
        raise UnsupportedGateError(name) from None


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...] = ()
    param: float | None = None

    def __post_init__(self) -> None:
        kind = self.kind if isinstance(self.kind, GateKind) else gate_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if kind is GateKind.MEASURE_ALL:
            expected = 0
        elif kind in TWO_QUBIT:
            expected = 2
        else:
            expected = 1
        if len(self.qubits) != expected:
            raise InputError(f"{kind.value} takes {expected} qubit(s), got {list(self.qubits)}")
        if expected == 2 and self.qubits[0] == self.qubits[1]:
            raise InputError(f"{kind.value} needs two distinct qubits, got {list(self.qubits)}")
        if any(q < 0 for q in self.qubits):
            raise QubitRangeError(f"negative qubit index in {kind.value}{list(self.qubits)}")
        if kind in PARAMETRIC:
            if self.param is None:
                raise InputError(f"{kind.value} requires an angle")
            object.__setattr__(self, "param", float(self.param))
        elif self.param is not None:
            raise InputError(f"{kind.value} takes no angle")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT

    def inverse(self) -> Gate:
        if self.kind is GateKind.MEASURE_ALL:
            raise InputError("measurement has no inverse")
        if self.kind in PARAMETRIC:
            return Gate(self.kind, self.qubits, -self.param)
        return self

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind.value, "qubits": list(self.qubits)}
        if self.param is not None:
            d["param"] = self.param
        return d


@dataclass(frozen=True)
class CircuitMetrics:
    depth: int
    two_qubit_depth: int
    two_qubit_gate_count: int


@dataclass(frozen=True)
class UserCircuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise InputError("num_qubits must be non-negative")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for q in g.qubits:
                if q >= self.num_qubits:
                    raise QubitRangeError(
                        f"qubit {q} out of range for {self.num_qubits}-qubit circuit in {g.kind.value}"
                    )

    def __len__(self) -> int:
        return len(self.gates)

    def two_qubit_gates(self) -> list[Gate]:
        return [g for g in self.gates if g.is_two_qubit]

    def to_dict(self) -> dict:
        return {"num_qubits": self.num_qubits, "gates": [g.to_dict() for g in self.gates]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> UserCircuit:
        if not isinstance(data, dict) or "num_qubits" not in data:
            raise InputError("circuit JSON needs 'num_qubits' and 'gates'")
        gates = []
        for i, g in enumerate(data.get("gates", [])):
            if not isinstance(g, dict) or "kind" not in g:
                raise InputError(f"gate #{i} is not an object with a 'kind'")
            gates.append(Gate(gate_kind(str(g["kind"])), tuple(g.get("qubits", ())), g.get("param")))
        return cls(int(data["num_qubits"]), tuple(gates))


def parse_circuit(source: str, format: str = "json") -> UserCircuit:
    """Parse circuit text in ``json`` or ``qasm2`` (OpenQASM 2 subset) form."""
    fmt = format.lower()
    if fmt == "json":
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise CircuitParseError(exc.msg, exc.lineno, exc.colno) from None
        return UserCircuit.from_dict(data)
    if fmt in ("qasm", "qasm2", "qasm2-subset"):
        from .qasm import parse_qasm

        return parse_qasm(source)
    raise InputError(f"unknown circuit format {format!r}")


def serialize_circuit(circuit: UserCircuit) -> str:
    return circuit.to_json()


def make_qaoa_path(n: int, p: int, gammas: Sequence[float], betas: Sequence[float]) -> UserCircuit:
    """QAOA ansatz for MaxCut on the path graph ``0-1-...-(n-1)``.

    Each cost layer emits the RZZ terms on even edges first, then odd edges, so
    that a layer packs into two RZZ time-steps.
    """
    if n < 2 or p < 1:
        raise InputError("QAOA path needs n >= 2 and p >= 1")
    if len(gammas) != p or len(betas) != p:
        raise InputError(f"expected {p} gammas and betas, got {len(gammas)} and {len(betas)}")
    gates = [Gate(GateKind.H, (q,)) for q in range(n)]
    edges = [(i, i + 1) for i in range(0, n - 1, 2)] + [(i, i + 1) for i in range(1, n - 1, 2)]
    for gamma, beta in zip(gammas, betas):
        gates += [Gate(GateKind.RZZ, e, gamma) for e in edges]
        gates += [Gate(GateKind.RX, (q,), beta) for q in range(n)]
    return UserCircuit(n, tuple(gates))


def make_mirror(circuit: UserCircuit) -> UserCircuit:
    if any(g.kind is GateKind.MEASURE_ALL for g in circuit.gates):
        raise InputError("cannot mirror a circuit containing measurement")
    inverse = tuple(g.inverse() for g in reversed(circuit.gates))
    return UserCircuit(circuit.num_qubits, circuit.gates + inverse)


def metrics(circuit: UserCircuit) -> CircuitMetrics:
    """ASAP leveling. RZZ and SWAP occupy 2 and 3 CNOT time-steps respectively."""
    front = [0] * circuit.num_qubits
    two_qubit_levels: set[int] = set()
    depth = 0
    for g in circuit.gates:
        wires = g.qubits if g.qubits else tuple(range(circuit.num_qubits))
        if not wires:
            continue
        start = max(front[q] for q in wires) + 1
        steps = CNOT_STEPS.get(g.kind, 1)
        end = start + steps - 1
        for q in wires:
            front[q] = end
        if g.is_two_qubit:
            two_qubit_levels.update(range(start, end + 1))
        depth = max(depth, end)
    count = sum(1 for g in circuit.gates if g.is_two_qubit)
    return CircuitMetrics(depth, len(two_qubit_levels), count)


def random_circuit(
    num_qubits: int,
    num_gates: int,
    rng: np.random.Generator,
    kinds: Iterable[GateKind] | None = None,
    clifford_angles: bool = False,
) -> UserCircuit:
    """Uniformly random gate list, used as a property-test fixture.

    With ``clifford_angles`` every rotation angle is a multiple of pi/2.
    """
    pool = list(kinds) if kinds is not None else [k for k in GateKind if k is not GateKind.MEASURE_ALL]
    if num_qubits < 2:
        pool = [k for k in pool if k not in TWO_QUBIT]
    gates = []
    for _ in range(num_gates):
        kind = pool[rng.integers(len(pool))]
        if kind in TWO_QUBIT:
            qubits = tuple(int(q) for q in rng.choice(num_qubits, size=2, replace=False))
        else:
            qubits = (int(rng.integers(num_qubits)),)
        param = None
        if kind in PARAMETRIC:
            if clifford_angles:
                param = float(rng.integers(-3, 4)) * math.pi / 2
            else:
                param = float(rng.uniform(-math.pi, math.pi))
        gates.append(Gate(kind, qubits, param))
    return UserCircuit(num_qubits, tuple(gates))
