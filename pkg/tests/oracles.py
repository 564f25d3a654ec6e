"""Independent reference implementations used only by the tests.

Nothing here imports the stabilizer or Pauli-frame code: gates are dense
unitaries, noise is applied as Kraus/Pauli-twirl channels on a density matrix.
Qubit 0 is the most significant bit so that basis index order matches the
left-origin bitstring convention.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PAULIS = [I2, X, Y, Z]


def rx(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def rz(theta):
    return np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])


def cx():
    u = np.eye(4, dtype=complex)
    u[[2, 3]] = u[[3, 2]]
    return u


def cz():
    return np.diag([1, 1, 1, -1]).astype(complex)


def rzz(theta):
    return np.diag(np.exp(-1j * theta / 2 * np.array([1, -1, -1, 1])))


def swap():
    u = np.eye(4, dtype=complex)
    u[[1, 2]] = u[[2, 1]]
    return u


def gate_unitary(kind: str, param):
    return {
        "H": lambda: H,
        "X": lambda: X,
        "Z": lambda: Z,
        "RX": lambda: rx(param),
        "RZ": lambda: rz(param),
        "CX": cx,
        "CZ": cz,
        "RZZ": lambda: rzz(param),
        "SWAP": swap,
    }[kind]()


def _apply(tensor: np.ndarray, u: np.ndarray, axes: list[int]) -> np.ndarray:
    k = len(axes)
    u = u.reshape((2,) * (2 * k))
    out = np.tensordot(u, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def apply_unitary_state(psi: np.ndarray, u: np.ndarray, qubits, n: int) -> np.ndarray:
    return _apply(psi.reshape((2,) * n), u, list(qubits)).reshape(-1)


def apply_unitary_rho(rho: np.ndarray, u: np.ndarray, qubits, n: int) -> np.ndarray:
    t = rho.reshape((2,) * (2 * n))
    t = _apply(t, u, list(qubits))
    t = _apply(t, u.conj(), [q + n for q in qubits])
    return t.reshape(2**n, 2**n)


def depolarize(rho: np.ndarray, p: float, qubits, n: int) -> np.ndarray:
    if p == 0:
        return rho
    k = len(qubits)
    out = (1 - p) * rho
    weight = p / (4**k - 1)
    for combo in itertools.product(range(4), repeat=k):
        if not any(combo):
            continue
        op = PAULIS[combo[0]]
        for c in combo[1:]:
            op = np.kron(op, PAULIS[c])
        out = out + weight * apply_unitary_rho(rho, op, qubits, n)
    return out


def statevector(circuit) -> np.ndarray:
    n = circuit.num_qubits
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1
    for g in circuit.gates:
        if g.kind.value == "MEASURE-ALL":
            continue
        psi = apply_unitary_state(psi, gate_unitary(g.kind.value, g.param), g.qubits, n)
    return psi


def noisy_distribution(circuit, p1, p2, pm) -> np.ndarray:
    """Exact outcome distribution of ``circuit`` with depolarizing noise after each
    gate and independent readout flips. ``p1[q]``, ``pm[q]`` per wire,
    ``p2[(a, b)]`` per sorted wire pair. RZZ and SWAP are expanded as CX-RZ-CX
    and three CX with noise after each piece."""
    n = circuit.num_qubits
    rho = np.zeros((2**n, 2**n), dtype=complex)
    rho[0, 0] = 1
    for g in circuit.gates:
        kind = g.kind.value
        if kind == "MEASURE-ALL":
            continue
        if kind == "RZZ":
            a, b = g.qubits
            pieces = [("CX", (a, b), None), ("RZ", (b,), g.param), ("CX", (a, b), None)]
        elif kind == "SWAP":
            a, b = g.qubits
            pieces = [("CX", (a, b), None), ("CX", (b, a), None), ("CX", (a, b), None)]
        else:
            pieces = [(kind, g.qubits, g.param)]
        for k, qs, param in pieces:
            rho = apply_unitary_rho(rho, gate_unitary(k, param), qs, n)
            if len(qs) == 1:
                rho = depolarize(rho, p1[qs[0]], qs, n)
            else:
                rho = depolarize(rho, p2[tuple(sorted(qs))], qs, n)
    probs = np.real(np.diag(rho)).clip(min=0)
    probs = probs.reshape((2,) * n)
    for q in range(n):
        flip = pm[q]
        probs = (1 - flip) * probs + flip * np.flip(probs, axis=q)
    probs = probs.reshape(-1)
    return probs / probs.sum()


def bitstrings(n: int) -> list[str]:
    return [format(i, f"0{n}b") for i in range(2**n)]


def brute_force_layouts(num_vertices: int, edges, num_qubits: int, hw_edges) -> list[tuple[int, ...]]:
    hw = {tuple(sorted(e)) for e in hw_edges}
    out = []
    for perm in itertools.permutations(range(num_qubits), num_vertices):
        if all(tuple(sorted((perm[a], perm[b]))) in hw for a, b in edges):
            out.append(perm)
    return sorted(out)


def chromatic_number(num_vertices: int, edges) -> int:
    for k in range(1, num_vertices + 1):
        for colours in itertools.product(range(k), repeat=num_vertices):
            if all(colours[a] != colours[b] for a, b in edges):
                return k
    return 0


def tv_null_threshold(probs: np.ndarray, shots: int, rng: np.random.Generator, draws: int = 300) -> float:
    """mean + 3 sd of the total-variation distance between ``probs`` and a
    multinomial sample of ``shots`` drawn from it."""
    samples = rng.multinomial(shots, probs, size=draws) / shots
    tvd = 0.5 * np.abs(samples - probs).sum(axis=1)
    return float(tvd.mean() + 3 * tvd.std())
