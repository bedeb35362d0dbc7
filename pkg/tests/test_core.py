import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mcg.core import (
    Angle,
    Circuit,
    CostVector,
    Gate,
    GateKind,
    McGateSpec,
    McKind,
    SpecError,
    UnitVector,
    cost_of,
    depth_of,
    validate_spec,
)


class TestAngle:
    def test_rational_arithmetic_stays_exact(self):
        a = Angle.pi_frac(1, 4) + Angle.pi_frac(1, 2)
        assert a.frac == Fraction(3, 4)
        assert a.value == pytest.approx(3 * math.pi / 4)

    def test_quarter_turns(self):
        assert Angle.pi_frac(1, 4).quarter_turns() == 1
        assert Angle.pi_frac(-1, 4).quarter_turns() == 7
        assert Angle.pi_frac(5, 4).quarter_turns() == 5
        assert Angle.pi_frac(1, 3).quarter_turns() is None
        assert Angle.flt(math.pi / 4).quarter_turns() is None

    def test_wrapped(self):
        assert Angle.pi_frac(9, 2).wrapped(4).frac == Fraction(1, 2)
        assert Angle.pi_frac(2).wrapped(4).frac == Fraction(2)
        assert Angle.pi_frac(-3).wrapped(4).frac == Fraction(1)

    @given(st.integers(-40, 40), st.integers(1, 12))
    def test_scale_negate_roundtrip(self, p, q):
        a = Angle.pi_frac(p, q)
        assert (-(-a)).frac == a.frac
        assert a.scale(2).half().frac == a.frac


class TestUnitVector:
    def test_norm_enforced(self):
        with pytest.raises(ValueError):
            UnitVector(1.0, 1.0, 0.0)
        v = UnitVector.normalized(1.0, 1.0, 0.0)
        assert v.dot(v) == pytest.approx(1.0)

    @given(st.floats(0.01, math.pi - 0.01), st.floats(-math.pi, math.pi))
    def test_spherical_roundtrip(self, theta, phi):
        v = UnitVector.from_spherical(theta, phi)
        t2, p2 = v.spherical()
        assert t2 == pytest.approx(theta, abs=1e-9)
        assert math.cos(p2 - phi) == pytest.approx(1.0, abs=1e-9)


class TestCircuit:
    def test_gate_arity_enforced(self):
        with pytest.raises(ValueError):
            Gate(GateKind.CX, (0,))
        with pytest.raises(ValueError):
            Gate(GateKind.CX, (1, 1))
        with pytest.raises(ValueError):
            Gate(GateKind.H, (0,), Angle.pi_frac(1))

    def test_adjoint_reverses_and_daggers(self):
        c = Circuit(2).t(0).cx(0, 1).rz(1, Angle.pi_frac(1, 3))
        adj = c.adjoint()
        kinds = [g.kind for g in adj.gates]
        assert kinds == [GateKind.RZ, GateKind.CX, GateKind.TDG]
        assert adj.gates[0].angle.frac == Fraction(-1, 3)

    def test_reversed_register(self):
        c = Circuit(3).cx(0, 1)
        assert c.reversed_register().gates[0].qubits == (2, 1)


class TestCostVector:
    def test_gate_pricing(self):
        c = Circuit(3)
        c.cx(0, 1).h(0).h(0)
        assert cost_of(c) == CostVector(1, 0, 2, 0)

    def test_swap_prices_three_cnots(self):
        assert cost_of(Circuit(2).swap(0, 1)) == CostVector(3, 0, 0, 0)

    def test_rx_prices_h_rz_h(self):
        assert cost_of(Circuit(1).rx(0, 0.3)) == CostVector(0, 0, 2, 1)

    def test_free_cliffords(self):
        c = Circuit(1).x(0).y(0).z(0).s(0).sdg(0)
        assert cost_of(c) == CostVector()

    @given(st.lists(st.sampled_from(["h", "t", "x", "s"]), max_size=30),
           st.lists(st.sampled_from(["h", "tdg", "z", "rz"]), max_size=30))
    def test_cost_additive_over_concatenation(self, aa, bb):
        def build(names):
            c = Circuit(2)
            for i, nm in enumerate(names):
                if nm == "rz":
                    c.rz(i % 2, 0.7)
                else:
                    getattr(c, nm)(i % 2)
            return c

        c1, c2 = build(aa), build(bb)
        assert cost_of(c1 + c2) == cost_of(c1) + cost_of(c2)


class TestDepth:
    def test_disjoint_supports_share_a_layer(self):
        assert depth_of(Circuit(4).cx(0, 1).cx(2, 3)).cx == 1

    def test_overlapping_supports_stack(self):
        assert depth_of(Circuit(3).cx(0, 1).cx(1, 2)).cx == 2

    def test_depth_bounded_by_cost(self):
        c = Circuit(3).h(0).t(0).cx(0, 1).tdg(1).cx(1, 2).h(2).rz(2, 0.5)
        d, g = depth_of(c), cost_of(c)
        assert d.cx <= g.cx and d.t <= g.t and d.h <= g.h and d.rz <= g.rz


class TestSpecValidation:
    def test_overlap_rejected(self):
        with pytest.raises(SpecError):
            validate_spec(McGateSpec(McKind.MCX, 4, {0, 2}, 2, 3))
        with pytest.raises(SpecError):
            validate_spec(McGateSpec(McKind.MCX, 4, {0}, 2, 2))

    def test_window_convention_rejected(self):
        # index 3 belongs to nothing: not the smallest window
        with pytest.raises(SpecError):
            validate_spec(McGateSpec(McKind.MCX, 4, {0}, 1, 2))

    def test_ancilla_capacity(self):
        with pytest.raises(SpecError):
            validate_spec(McGateSpec(McKind.MCX, 3, {0, 2}, 1))
        validate_spec(McGateSpec(McKind.MCX, 2, {0}, 1))  # degenerate CX

    def test_mcsu2_needs_axis_angle_and_no_ancilla(self):
        ok = McGateSpec(McKind.MCSU2, 3, {0, 2}, 1,
                        axis=UnitVector(0.0, 0.0, 1.0), angle=Angle.pi_frac(1, 2))
        validate_spec(ok)
        with pytest.raises(SpecError):
            validate_spec(McGateSpec(McKind.MCSU2, 3, {0, 2}, 1))
        with pytest.raises(SpecError):
            validate_spec(McGateSpec(McKind.MCSU2, 4, {0, 2}, 1, ancilla=3,
                                     axis=UnitVector(0, 0, 1.0),
                                     angle=Angle.pi_frac(1)))

    def test_delta_kind_placements(self):
        validate_spec(McGateSpec(McKind.MCZ_DELTA, 4, {0, 1}, 3))
        with pytest.raises(SpecError):  # quasi-ancilla slot must stay free
            validate_spec(McGateSpec(McKind.MCZ_DELTA, 4, {0, 2}, 3))
        with pytest.raises(SpecError):  # target must sit at a window end
            validate_spec(McGateSpec(McKind.MCZ_DELTA, 4, {0, 3}, 1))
        validate_spec(McGateSpec(McKind.MCX_DELTA, 4, {0, 3}, 1))
        with pytest.raises(SpecError):  # target below the second slot
            validate_spec(McGateSpec(McKind.MCX_DELTA, 4, {0, 3}, 2))
