"""OpenQASM 2.0 subset reader.

Accepts a single ``qreg``, any ``creg``, the gates of :class:`GateKind` in
their qelib1 spelling, ``measure`` (mapped to one MEASURE-ALL) and ``barrier``
(a scheduling hint with no effect on the gate list). Anything else is rejected.
"""
from __future__ import annotations

import ast
import math
import operator
import re

from .circuit import Gate, GateKind, UserCircuit
from .errors import CircuitParseError, QubitRangeError, UnsupportedGateError

_QASM_GATES = {
    "h": GateKind.H,
    "x": GateKind.X,
    "z": GateKind.Z,
    "rx": GateKind.RX,
    "rz": GateKind.RZ,
    "cx": GateKind.CX,
    "cz": GateKind.CZ,
    "rzz": GateKind.RZZ,
    "swap": GateKind.SWAP,
}

_STATEMENT = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\((?P<params>[^)]*)\))?\s*(?P<args>.*)$", re.S)
_QUBIT_REF = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*(?:\[\s*(\d+)\s*\])?$")
_REG_DECL = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(\d+)\s*\]$")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_angle(text: str, line: int) -> float:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise CircuitParseError(f"bad angle expression {text!r}", line) from None

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise CircuitParseError(f"bad angle expression {text!r}", line)

    return ev(tree)


def _statements(source: str):
    """Yield (text, line, column) for each ';'-terminated statement, comments stripped."""
    cleaned = re.sub(r"//[^\n]*", lambda m: " " * len(m.group()), source)
    start = 0
    for i, ch in enumerate(cleaned):
        if ch == ";":
            chunk = cleaned[start:i]
            offset = len(chunk) - len(chunk.lstrip())
            pos = start + offset
            line = cleaned.count("\n", 0, pos) + 1
            col = pos - (cleaned.rfind("\n", 0, pos) + 1) + 1
            if chunk.strip():
                yield chunk.strip(), line, col
            start = i + 1
    tail = cleaned[start:]
    if tail.strip():
        pos = start + len(tail) - len(tail.lstrip())
        line = cleaned.count("\n", 0, pos) + 1
        col = pos - (cleaned.rfind("\n", 0, pos) + 1) + 1
        raise CircuitParseError("missing ';'", line, col)


def parse_qasm(source: str) -> UserCircuit:
    header_seen = False
    qreg: tuple[str, int] | None = None
    cregs: dict[str, int] = {}
    gates: list[Gate] = []

    def resolve(ref: str, line: int, col: int) -> list[int]:
        m = _QUBIT_REF.match(ref.strip())
        if not m:
            raise CircuitParseError(f"bad qubit reference {ref.strip()!r}", line, col)
        if qreg is None:
            raise CircuitParseError("gate before qreg declaration", line, col)
        name, idx = m.group(1), m.group(2)
        if name != qreg[0]:
            raise CircuitParseError(f"unknown register {name!r}", line, col)
        if idx is None:
            return list(range(qreg[1]))
        q = int(idx)
        if q >= qreg[1]:
            raise QubitRangeError(f"line {line}: qubit {name}[{q}] out of range for qreg of size {qreg[1]}")
        return [q]

    for text, line, col in _statements(source):
        if not header_seen:
            if not re.fullmatch(r"OPENQASM\s+2(\.0)?", text):
                raise CircuitParseError("expected 'OPENQASM 2.0' header", line, col)
            header_seen = True
            continue
        if text.startswith("include"):
            continue
        if text.startswith("qreg"):
            m = _REG_DECL.match(text[4:].strip())
            if not m:
                raise CircuitParseError("bad qreg declaration", line, col)
            if qreg is not None:
                raise UnsupportedGateError("second qreg", line)
            qreg = (m.group(1), int(m.group(2)))
            continue
        if text.startswith("creg"):
            m = _REG_DECL.match(text[4:].strip())
            if not m:
                raise CircuitParseError("bad creg declaration", line, col)
            cregs[m.group(1)] = int(m.group(2))
            continue
        if text.startswith("measure"):
            if qreg is None:
                raise CircuitParseError("measure before qreg declaration", line, col)
            parts = text[len("measure"):].split("->")
            if len(parts) != 2:
                raise CircuitParseError("measure needs 'q -> c'", line, col)
            resolve(parts[0], line, col)
            if not gates or gates[-1].kind is not GateKind.MEASURE_ALL:
                gates.append(Gate(GateKind.MEASURE_ALL))
            continue
        m = _STATEMENT.match(text)
        if not m:
            raise CircuitParseError(f"cannot parse statement {text!r}", line, col)
        name = m.group("name")
        if name == "barrier":
            continue
        kind = _QASM_GATES.get(name)
        if kind is None:
            raise UnsupportedGateError(name, line)
        params = m.group("params")
        param = None
        if kind in (GateKind.RX, GateKind.RZ, GateKind.RZZ):
            if params is None:
                raise CircuitParseError(f"{name} needs an angle", line, col)
            param = _eval_angle(params, line)
        elif params is not None:
            raise CircuitParseError(f"{name} takes no angle", line, col)
        args = [a for a in m.group("args").split(",")]
        if kind in (GateKind.CX, GateKind.CZ, GateKind.RZZ, GateKind.SWAP):
            if len(args) != 2:
                raise CircuitParseError(f"{name} needs two qubit arguments", line, col)
            a, b = resolve(args[0], line, col), resolve(args[1], line, col)
            if len(a) != 1 or len(b) != 1:
                raise UnsupportedGateError(f"{name} register broadcast", line)
            gates.append(Gate(kind, (a[0], b[0]), param))
        else:
            if len(args) != 1:
                raise CircuitParseError(f"{name} needs one qubit argument", line, col)
            for q in resolve(args[0], line, col):
                gates.append(Gate(kind, (q,), param))

    if not header_seen:
        raise CircuitParseError("empty source; expected 'OPENQASM 2.0' header", 1, 1)
    if qreg is None:
        raise CircuitParseError("no qreg declared")
    return UserCircuit(qreg[1], tuple(gates))
