import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qicsel.circuit import (
    Gate,
    GateKind,
    UserCircuit,
    make_mirror,
    make_qaoa_path,
    metrics,
    parse_circuit,
    random_circuit,
    serialize_circuit,
)
from qicsel.errors import CircuitParseError, InputError, QubitRangeError, UnsupportedGateError

from .oracles import statevector


def test_qasm_single_cx():
    c = parse_circuit('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncx q[0],q[1];\n', "qasm2")
    assert c == UserCircuit(2, (Gate(GateKind.CX, (0, 1)),))


def test_json_rzz_fields():
    c = parse_circuit('{"num_qubits": 3, "gates": [{"kind": "RZZ", "qubits": [1, 2], "param": 0.7}]}')
    assert c.gates == (Gate(GateKind.RZZ, (1, 2), 0.7),)


def test_qasm_unsupported_gate_named():
    src = "OPENQASM 2.0;\nqreg q[3];\nccx q[0],q[1],q[2];\n"
    with pytest.raises(UnsupportedGateError, match="ccx") as info:
        parse_circuit(src, "qasm2")
    assert "line 3" in str(info.value)


def test_qasm_full_subset():
    src = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg c[3];
h q;            // broadcast
rz(pi/2) q[0];
rx(-0.25*pi) q[1];
cz q[0],q[2];
rzz(0.5) q[1],q[2];
swap q[0],q[1];
barrier q;
measure q -> c;
"""
    c = parse_circuit(src, "qasm2")
    kinds = [g.kind for g in c.gates]
    assert kinds == [GateKind.H] * 3 + [GateKind.RZ, GateKind.RX, GateKind.CZ, GateKind.RZZ, GateKind.SWAP,
                                        GateKind.MEASURE_ALL]
    assert c.gates[3].param == pytest.approx(math.pi / 2)
    assert c.gates[4].param == pytest.approx(-math.pi / 4)


@pytest.mark.parametrize(
    "src, exc",
    [
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[5];\n", QubitRangeError),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0] q[1]\n", CircuitParseError),
        ("qreg q[2];\nh q[0];\n", CircuitParseError),
        ("OPENQASM 2.0;\nqreg q[2];\nrx(foo) q[0];\n", CircuitParseError),
        ("OPENQASM 2.0;\nqreg q[2];\nqreg r[2];\n", UnsupportedGateError),
    ],
)
def test_qasm_errors(src, exc):
    with pytest.raises(exc):
        parse_circuit(src, "qasm2")


def test_json_syntax_error_has_position():
    with pytest.raises(CircuitParseError) as info:
        parse_circuit('{"num_qubits": 2,\n "gates": [}')
    assert info.value.line == 2


@pytest.mark.parametrize(
    "gate",
    [
        {"kind": "CX", "qubits": [0]},
        {"kind": "CX", "qubits": [1, 1]},
        {"kind": "RX", "qubits": [0]},
        {"kind": "H", "qubits": [0], "param": 1.0},
        {"kind": "TOFFOLI", "qubits": [0, 1]},
    ],
)
def test_json_gate_invariants(gate):
    with pytest.raises(InputError):
        UserCircuit.from_dict({"num_qubits": 3, "gates": [gate]})


def test_json_out_of_range():
    with pytest.raises(QubitRangeError):
        UserCircuit.from_dict({"num_qubits": 2, "gates": [{"kind": "H", "qubits": [2]}]})


_one = st.sampled_from([GateKind.H, GateKind.X, GateKind.Z, GateKind.RX, GateKind.RZ])
_two = st.sampled_from([GateKind.CX, GateKind.CZ, GateKind.RZZ, GateKind.SWAP])
_angle = st.floats(-10, 10, allow_nan=False)


@st.composite
def circuits(draw):
    n = draw(st.integers(2, 8))
    gates = []
    for _ in range(draw(st.integers(0, 30))):
        if draw(st.booleans()):
            kind = draw(_one)
            qubits = (draw(st.integers(0, n - 1)),)
        else:
            kind = draw(_two)
            a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            qubits = (a, b)
        param = draw(_angle) if kind in (GateKind.RX, GateKind.RZ, GateKind.RZZ) else None
        gates.append(Gate(kind, qubits, param))
    if draw(st.booleans()):
        gates.append(Gate(GateKind.MEASURE_ALL))
    return UserCircuit(n, tuple(gates))


@given(circuits())
def test_json_round_trip(c):
    assert parse_circuit(serialize_circuit(c)) == c


def test_qaoa_smallest():
    c = make_qaoa_path(2, 1, [0.3], [0.4])
    assert c.gates == (
        Gate(GateKind.H, (0,)),
        Gate(GateKind.H, (1,)),
        Gate(GateKind.RZZ, (0, 1), 0.3),
        Gate(GateKind.RX, (0,), 0.4),
        Gate(GateKind.RX, (1,), 0.4),
    )


def test_qaoa_six_two_pair_counts():
    c = make_qaoa_path(6, 2, [0.1, 0.2], [0.3, 0.4])
    per_pair = {}
    for g in c.two_qubit_gates():
        per_pair[g.qubits] = per_pair.get(g.qubits, 0) + 1
    assert per_pair == {(i, i + 1): 2 for i in range(5)}


def test_qaoa_depth_eleven_layers():
    c = make_qaoa_path(6, 11, [0.1] * 11, [0.2] * 11)
    assert {g.qubits for g in c.two_qubit_gates()} == {(i, i + 1) for i in range(5)}
    assert sum(g.kind is GateKind.RZZ for g in c.gates) == 55


@given(st.integers(2, 12), st.integers(1, 6))
def test_qaoa_gate_count(n, p):
    m = metrics(make_qaoa_path(n, p, [0.1] * p, [0.2] * p))
    assert m.two_qubit_gate_count == p * (n - 1)


def test_qaoa_bad_args():
    with pytest.raises(InputError):
        make_qaoa_path(6, 2, [0.1], [0.2, 0.3])


def test_mirror_examples():
    h = UserCircuit(1, (Gate(GateKind.H, (0,)),))
    assert make_mirror(h).gates == (Gate(GateKind.H, (0,)), Gate(GateKind.H, (0,)))
    rz = UserCircuit(1, (Gate(GateKind.RZ, (0,), 0.3),))
    assert make_mirror(rz).gates == (Gate(GateKind.RZ, (0,), 0.3), Gate(GateKind.RZ, (0,), -0.3))


def test_mirror_of_qaoa_zz_is_one():
    mirror = make_mirror(make_qaoa_path(6, 2, [0.37, 1.1], [0.52, 0.9]))
    psi = statevector(mirror)
    probs = np.abs(psi) ** 2
    assert probs[0] == pytest.approx(1.0, abs=1e-12)
    # ZZ chain expectation from the exact distribution
    zz = 0.0
    for idx, p in enumerate(probs):
        bits = format(idx, "06b")
        zz += p * np.mean([1 if bits[i] == bits[i + 1] else -1 for i in range(5)])
    assert zz == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mirror_is_identity_on_zero(seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(int(rng.integers(1, 7)), int(rng.integers(0, 40)), rng)
    probs = np.abs(statevector(make_mirror(c))) ** 2
    assert probs[0] == pytest.approx(1.0, abs=1e-9)


def test_mirror_rejects_measurement():
    with pytest.raises(InputError):
        make_mirror(UserCircuit(1, (Gate(GateKind.MEASURE_ALL),)))


def test_metrics_examples():
    m = metrics(make_qaoa_path(6, 2, [0.1, 0.2], [0.3, 0.4]))
    assert m.two_qubit_depth == 8
    assert metrics(UserCircuit(0)) == metrics(UserCircuit(3)) == type(m)(0, 0, 0)
    disjoint = UserCircuit(4, (Gate(GateKind.CX, (0, 1)), Gate(GateKind.CX, (2, 3))))
    assert metrics(disjoint).two_qubit_depth == 1


@given(circuits())
def test_metrics_bounds(c):
    m = metrics(c)
    assert 0 <= m.two_qubit_depth <= m.depth
    assert m.two_qubit_gate_count == len(c.two_qubit_gates())
