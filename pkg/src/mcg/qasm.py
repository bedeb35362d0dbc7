"""Circuit serialization: an OpenQASM-2 subset and a JSON IR.

The QASM subset covers exactly the emitted gate set.  Angles print as
rational-pi expressions when exact and as 17-significant-digit floats
otherwise, so parse(emit(c)) reproduces c gate for gate.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .core import Angle, Circuit, Gate, GateKind

QASM_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

_QASM_KINDS = {k.value for k in GateKind}


def angle_to_qasm(a: Angle) -> str:
    if a.frac is not None:
        p, q = a.frac.numerator, a.frac.denominator
        if p == 0:
            return "0"
        sign = "-" if p < 0 else ""
        p = abs(p)
        core = "pi" if p == 1 else f"{p}*pi"
        if q != 1:
            core += f"/{q}"
        return sign + core
    return f"{a.value:.17g}"


_ANGLE_RE = re.compile(r"^(-)?(?:(\d+)\*)?pi(?:/(\d+))?$")


def angle_from_qasm(text: str) -> Angle:
    text = text.strip()
    m = _ANGLE_RE.match(text)
    if m:
        sign = -1 if m.group(1) else 1
        p = int(m.group(2)) if m.group(2) else 1
        q = int(m.group(3)) if m.group(3) else 1
        return Angle.pi_frac(sign * p, q)
    if text == "0":
        return Angle.pi_frac(0)
    return Angle.flt(float(text))


def emit_qasm(circuit: Circuit) -> str:
    lines = [QASM_HEADER + f"qreg q[{circuit.k}];"]
    for g in circuit.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.angle is not None:
            lines.append(f"{g.kind.value}({angle_to_qasm(g.angle)}) {args};")
        else:
            lines.append(f"{g.kind.value} {args};")
    return "\n".join(lines) + "\n"


_LINE_RE = re.compile(
    r"^(?P<name>[a-z]+)(?:\((?P<angle>[^)]*)\))?\s+(?P<args>q\[\d+\](?:,\s*q\[\d+\])*);$"
)


def parse_qasm(text: str) -> Circuit:
    circ = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        if line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = re.match(r"^qreg\s+q\[(\d+)\];$", line)
        if m:
            circ = Circuit(int(m.group(1)))
            continue
        if circ is None:
            raise ValueError("gate before qreg declaration")
        m = _LINE_RE.match(line)
        if not m:
            raise ValueError(f"unsupported QASM line: {line!r}")
        name = m.group("name")
        if name not in _QASM_KINDS:
            raise ValueError(f"unsupported gate {name!r}")
        kind = GateKind(name)
        qubits = tuple(int(x) for x in re.findall(r"q\[(\d+)\]", m.group("args")))
        angle = None
        if m.group("angle") is not None:
            angle = angle_from_qasm(m.group("angle"))
        circ.append(Gate(kind, qubits, angle))
    if circ is None:
        raise ValueError("no qreg declaration found")
    return circ


# ---------------------------------------------------------------------------
# JSON IR
# ---------------------------------------------------------------------------

def _angle_obj(a: Angle):
    if a.frac is not None:
        return {"pi_num": a.frac.numerator, "pi_den": a.frac.denominator}
    return {"value": a.value}


def _angle_from_obj(obj) -> Angle:
    if "pi_num" in obj:
        return Angle.pi_frac(Fraction(obj["pi_num"], obj["pi_den"]))
    return Angle.flt(obj["value"])


def to_json(circuit: Circuit) -> str:
    gates = []
    for g in circuit.gates:
        entry = {"kind": g.kind.value, "qubits": list(g.qubits)}
        if g.angle is not None:
            entry["angle"] = _angle_obj(g.angle)
        gates.append(entry)
    return json.dumps({"k": circuit.k, "gates": gates}, indent=None)


def from_json(text: str) -> Circuit:
    data = json.loads(text)
    circ = Circuit(int(data["k"]))
    for entry in data["gates"]:
        kind = GateKind(entry["kind"])
        angle = _angle_from_obj(entry["angle"]) if "angle" in entry else None
        circ.append(Gate(kind, tuple(entry["qubits"]), angle))
    return circ


def dump_circuit(circuit: Circuit, fmt: str) -> str:
    if fmt == "qasm":
        return emit_qasm(circuit)
    if fmt == "json":
        return to_json(circuit)
    raise ValueError(f"unknown format {fmt!r}")


def load_circuit(text: str) -> Circuit:
    """Load either format, sniffing the first non-blank character."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return from_json(text)
    return parse_qasm(text)
