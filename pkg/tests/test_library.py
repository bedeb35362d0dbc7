"""Every catalog entry is validated against the dense oracle before being
trusted anywhere else; declared costs must match built costs exactly."""
import math

import numpy as np
import pytest

from mcg import library as lib
from mcg.core import Angle, Circuit, McGateSpec, McKind, UnitVector, V_V, cost_of, depth_of
from mcg.library import DIAG_RESIDUE, DIAG_RESIDUE_TRAILING_CX, EXACT, LIBRARY, build_entry
from mcg.verify import compare, reference_unitary, simulate

THETAS = [0.8364, -1.91, math.pi / 2, 2 * math.pi / 3]


def vxbar(th):
    return UnitVector(0.0, -math.sin(th), math.cos(th))


def _reference(name, qubits, theta):
    k = max(qubits) + 1
    if name.startswith("pix_delta"):
        axis = vxbar(theta)
    elif name == "piv_delta_0":
        # the no-control box is the Hadamard replacement from Table 2
        axis = UnitVector.normalized(1.0, 0.0, 1.0)
    elif name.startswith("piv_delta"):
        axis = V_V
    elif name in ("x_delta_0", "x_delta_1", "rp_toffoli", "cnot_mid"):
        axis = UnitVector(1.0, 0.0, 0.0)
    elif name in ("ch", "cch_tilde"):
        axis = UnitVector.normalized(1.0, 0.0, 1.0)
    elif name in ("cz_seed", "cz_delta_seed"):
        axis = UnitVector(0.0, 0.0, 1.0)
    else:
        return None
    if name in ("cnot_mid", "cz_delta_seed"):
        controls, target = frozenset({qubits[0]}), qubits[2]
    elif len(qubits) == 1:
        controls, target = frozenset(), qubits[0]
    elif len(qubits) == 2:
        controls, target = frozenset({qubits[0]}), qubits[1]
    else:
        controls, target = frozenset({qubits[0], qubits[2]}), qubits[1]
    return reference_unitary(
        McGateSpec(McKind.MCPI, k, controls, target, axis=axis)
        if controls or True else None
    )


def _trailing_cx_qubits(name, qubits):
    # the starred control convention: the residue hides one CNOT from the
    # lower control onto the target
    return (qubits[2], qubits[1])


@pytest.mark.parametrize("name", sorted(LIBRARY))
def test_entry_cost_matches_declared(name):
    ent = LIBRARY[name]
    qubits = tuple(range(ent.arity))
    for theta in (THETAS if ent.parametric else [None]):
        circ = build_entry(name, qubits, theta)
        assert cost_of(circ) == ent.declared_cost, name


@pytest.mark.parametrize("name", sorted(LIBRARY))
def test_entry_relation_against_oracle(name):
    ent = LIBRARY[name]
    qubits = tuple(range(ent.arity))
    for theta in (THETAS if ent.parametric else [0.0]):
        circ = build_entry(name, qubits, theta if ent.parametric else None)
        built = simulate(circ)
        if name == "cciz":
            d = np.ones(2 ** 3, dtype=complex)
            d[6], d[7] = 1j, -1j
            ref = np.diag(d)
        elif name == "cciz_with_swap":
            d = np.ones(2 ** 3, dtype=complex)
            d[6], d[7] = 1j, -1j
            ref = np.diag(d) @ simulate(Circuit(3).swap(0, 1))
        else:
            ref = _reference(name, qubits, theta)
        if ent.relation == EXACT:
            assert compare(ref, built, "global_phase").passed, name
        elif ent.relation == DIAG_RESIDUE:
            assert compare(ref, built, "diag_residue").passed, name
        else:
            assert ent.relation == DIAG_RESIDUE_TRAILING_CX
            c, t = _trailing_cx_qubits(name, qubits)
            fixed = built @ simulate(Circuit(ent.arity).cx(c, t))
            assert compare(ref, fixed, "diag_residue").passed, name


class TestSpecificAnchors:
    def test_rp_toffoli_both_orientations(self):
        ref = reference_unitary(McGateSpec(McKind.MCX, 3, {0, 2}, 1))
        for orient in ("up", "down"):
            c = Circuit(3)
            lib.rp_toffoli(c, 0, 1, 2, orientation=orient)
            assert cost_of(c).tuple() == (3, 4, 2, 0)
            assert compare(ref, simulate(c), "diag_residue").passed

    def test_cz_delta_seed_residue_off_target(self):
        c = Circuit(3)
        lib.cz_delta_seed(c, 0, 1, 2)
        ref = reference_unitary(McGateSpec(McKind.MCZ, 3, {0}, 2))
        rep = compare(ref, simulate(c), "diag_residue", target_bit=2)
        assert rep.passed and rep.target_independent
        assert cost_of(c).tuple() == (3, 0, 2, 0)

    def test_cnot_mid_exact_both_directions(self):
        c = Circuit(3)
        lib.cnot_mid(c, 0, 1, 2)
        ref = reference_unitary(McGateSpec(McKind.MCX, 3, {0}, 2, ancilla=1))
        assert compare(ref, simulate(c), "exact").passed
        c = Circuit(3)
        lib.cnot_mid(c, 2, 1, 0)
        ref = reference_unitary(McGateSpec(McKind.MCX, 3, {2}, 0, ancilla=1))
        assert compare(ref, simulate(c), "exact").passed

    def test_cciz_t_depth_two(self):
        c = Circuit(3)
        lib.cciz(c, 0, 1, 2, "plain")
        assert depth_of(c).t == 2
        assert cost_of(c).cx == 7

    def test_case4_matches_h_conjugated_case1(self):
        # Table-1 consistency: the exact controlled entry is the H-conjugated
        # equatorial rotation with a control on its center
        th = 0.77
        c4 = Circuit(2)
        lib.pix_delta_case(c4, 4, Angle.flt(th), 1, c_minus=0)
        inner = Circuit(2).h(1)
        lib.c_pi_zbar(inner, 0, 1, Angle.flt(th))
        inner.h(1)
        assert np.max(np.abs(simulate(c4) - simulate(inner))) < 1e-12

    def test_pix_case_control_count_enforced(self):
        with pytest.raises(ValueError):
            lib.pix_delta_case(Circuit(2), 1, Angle.flt(0.3), 1, c_minus=0)
        with pytest.raises(ValueError):
            lib.pix_delta_case(Circuit(3), 3, Angle.flt(0.3), 1, c_minus=0)

    def test_adjacency_enforced(self):
        with pytest.raises(ValueError):
            lib.rp_toffoli(Circuit(4), 0, 2, 3)
        with pytest.raises(ValueError):
            lib.cz_gate(Circuit(4), 0, 3)

    def test_emit_rz_classification(self):
        c = Circuit(1)
        lib.emit_rz(c, 0, Angle.pi_frac(5, 4))
        kinds = [g.kind.value for g in c.gates]
        assert kinds == ["z", "t"]
        c = Circuit(1)
        lib.emit_rz(c, 0, Angle.pi_frac(0))
        assert len(c) == 0
        c = Circuit(1)
        lib.emit_rz(c, 0, Angle.flt(0.3))
        assert [g.kind.value for g in c.gates] == ["rz"]
