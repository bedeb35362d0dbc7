import math

import pytest
from hypothesis import given, strategies as st

from mcg.core import Angle, Circuit, Gate, GateKind
from mcg.qasm import (
    angle_from_qasm,
    angle_to_qasm,
    emit_qasm,
    from_json,
    load_circuit,
    parse_qasm,
    to_json,
)


class TestAngleStrings:
    @pytest.mark.parametrize("p,q,text", [
        (1, 4, "pi/4"), (-1, 4, "-pi/4"), (3, 4, "3*pi/4"),
        (1, 1, "pi"), (-2, 1, "-2*pi"), (0, 1, "0"),
    ])
    def test_rational_forms(self, p, q, text):
        assert angle_to_qasm(Angle.pi_frac(p, q)) == text
        back = angle_from_qasm(text)
        assert back.frac == Angle.pi_frac(p, q).frac

    @given(st.integers(-100, 100), st.integers(1, 64))
    def test_rational_roundtrip(self, p, q):
        a = Angle.pi_frac(p, q)
        assert angle_from_qasm(angle_to_qasm(a)).frac == a.frac

    @given(st.floats(-50, 50, allow_nan=False))
    def test_float_roundtrip_bit_exact(self, x):
        a = Angle.flt(x)
        back = angle_from_qasm(angle_to_qasm(a))
        assert back.frac is None or x == back.value
        assert back.value == x


def _sample_circuit():
    c = Circuit(4)
    c.h(0).t(1).tdg(2).s(3).sdg(0).x(1).y(2).z(3)
    c.cx(0, 1).swap(2, 3)
    c.rz(1, Angle.pi_frac(3, 4)).rz(2, Angle.flt(0.12345678901234567))
    c.rx(3, Angle.pi_frac(-1, 2))
    return c


class TestQasmRoundTrip:
    def test_every_gate_kind(self):
        c = _sample_circuit()
        assert parse_qasm(emit_qasm(c)) == c

    def test_header_and_shape(self):
        text = emit_qasm(Circuit(2).cx(0, 1))
        assert text.startswith('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];')
        assert "cx q[0],q[1];" in text

    def test_bad_input_rejected(self):
        with pytest.raises(ValueError):
            parse_qasm("cx q[0],q[1];")  # no qreg
        with pytest.raises(ValueError):
            parse_qasm('OPENQASM 2.0;\nqreg q[2];\nccx q[0],q[1],q[2];')


class TestJsonRoundTrip:
    def test_every_gate_kind(self):
        c = _sample_circuit()
        assert from_json(to_json(c)) == c

    def test_load_sniffs_format(self):
        c = _sample_circuit()
        assert load_circuit(emit_qasm(c)) == c
        assert load_circuit(to_json(c)) == c
