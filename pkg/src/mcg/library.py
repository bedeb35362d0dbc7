"""Fixed small decompositions the synthesizer stitches together.

Builders append gates in time order onto an existing circuit at explicit
(adjacent) register indices.  Every entry is validated against the dense
oracle in the test suite before being trusted; drawn-figure transcriptions
are never assumed correct.

Angle bookkeeping: a classified Rz (multiple of pi/4) is emitted as free
Clifford gates plus T/Tdg so that T counts stay exact; replacements are
equal up to global phase only, which every consumer tolerates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .core import Angle, Circuit, CostVector, Gate, GateKind, as_angle

# relation tags for library entries
EXACT = "exact"
DIAG_RESIDUE = "diag_residue"
DIAG_RESIDUE_TRAILING_CX = "diag_residue_with_trailing_cx"


def _adjacent(*qs: int) -> None:
    for a, b in zip(qs, qs[1:]):
        if abs(a - b) != 1:
            raise ValueError(f"qubits {qs} are not linearly adjacent")


# Gate sequences for Rz(m * pi/4) mod 2pi, m = 0..7, up to global phase.
_QUARTER_SEQS = {
    0: (),
    1: (GateKind.T,),
    2: (GateKind.S,),
    3: (GateKind.S, GateKind.T),
    4: (GateKind.Z,),
    5: (GateKind.Z, GateKind.T),
    6: (GateKind.SDG,),
    7: (GateKind.TDG,),
}


def emit_rz(circ: Circuit, q: int, angle) -> Circuit:
    """Append Rz(angle), classified into Clifford+T gates when the angle allows."""
    a = as_angle(angle)
    m = a.quarter_turns()
    if m is None:
        if not a.is_zero():
            circ.rz(q, a)
        return circ
    for kind in _QUARTER_SEQS[m]:
        circ.append(Gate(kind, (q,)))
    return circ


def emit_pi_s(circ: Circuit, q: int) -> Circuit:
    """Pi_S = Rz(pi/2) X up to a global phase; both factors are free Cliffords."""
    return circ.x(q).s(q)


def cz_gate(circ: Circuit, a: int, b: int) -> Circuit:
    """CZ as an H-conjugated CNOT, H on b."""
    _adjacent(a, b)
    return circ.h(b).cx(a, b).h(b)


def cnot_mid(circ: Circuit, ctrl: int, mid: int, tgt: int) -> Circuit:
    """Exact CNOT between next-nearest neighbors using 4 CNOTs (known identity)."""
    _adjacent(ctrl, mid, tgt)
    circ.cx(mid, tgt).cx(ctrl, mid).cx(mid, tgt).cx(ctrl, mid)
    return circ


def cz_delta_seed(circ: Circuit, top: int, mid: int, bot: int) -> Circuit:
    """Long-range CZ(top, bot) up to a diagonal residue that never touches bot.

    Cost (3,0,2,0); the seed of the MCZ-Delta recursion.
    """
    _adjacent(top, mid, bot)
    circ.cx(bot, mid)
    circ.h(top).cx(mid, top).h(top)
    circ.cx(bot, mid)
    return circ


def rp_toffoli(
    circ: Circuit,
    top: int,
    mid: int,
    bot: int,
    orientation: str = "up",
    drop_prefix: bool = False,
    drop_suffix: bool = False,
) -> Circuit:
    """Relative-phase Toffoli targeting the middle qubit; (3,4,2,0).

    ``up`` places the lone control of the inner CNOT below ("upwards"
    orientation); ``down`` is its vertical mirror.  ``drop_prefix`` /
    ``drop_suffix`` omit the leading/trailing [H, Tdg, CX(top->mid), T]
    dressing, used by the useful-ancilla cancellations (up orientation only).
    """
    _adjacent(top, mid, bot)
    first, second = (top, bot) if orientation == "up" else (bot, top)
    if drop_prefix or drop_suffix:
        if orientation != "up":
            raise ValueError("dressing drops apply to the up orientation only")
    if not drop_prefix:
        circ.h(mid).tdg(mid).cx(first, mid).t(mid)
    circ.cx(second, mid)
    if not drop_suffix:
        circ.tdg(mid).cx(first, mid).t(mid).h(mid)
    return circ


def x_delta_small(
    circ: Circuit, t: int, c_minus: Optional[int] = None, c_plus: Optional[int] = None
) -> Circuit:
    """Relative-phase X with 0/1/2 controls: X / CX / relative-phase Toffoli."""
    cs = [c for c in (c_minus, c_plus) if c is not None]
    if not cs:
        return circ.x(t)
    if len(cs) == 1:
        _adjacent(cs[0], t)
        return circ.cx(cs[0], t)
    return rp_toffoli(circ, c_minus, t, c_plus)


def c_pi_zbar(circ: Circuit, c: int, t: int, theta) -> Circuit:
    """Exact controlled Pi about the equatorial axis at azimuth theta; (1,0,0,2)."""
    _adjacent(c, t)
    th = as_angle(theta)
    emit_rz(circ, t, -th)
    circ.cx(c, t)
    emit_rz(circ, t, th)
    return circ


def c_pi_xbar(circ: Circuit, c: int, t: int, theta) -> Circuit:
    """Exact controlled Pi^theta_xbar (Table 1 case 4); (1,0,2,2)."""
    circ.h(t)
    c_pi_zbar(circ, c, t, theta)
    circ.h(t)
    return circ


def piv_delta_small(
    circ: Circuit, t: int, c_minus: Optional[int] = None, c_plus: Optional[int] = None
) -> Circuit:
    """Pi_V boxes of the relative-phase MCX sandwich: H / (1,2,2,0) / (3,6,4,0)."""
    cs = [c for c in (c_minus, c_plus) if c is not None]
    if not cs:
        return circ.h(t)
    if len(cs) == 1:
        _adjacent(cs[0], t)
        circ.h(t).tdg(t).cx(cs[0], t).t(t).h(t)
        return circ
    circ.h(t).tdg(t)
    rp_toffoli(circ, c_minus, t, c_plus)
    circ.t(t).h(t)
    return circ


def ch_gate(circ: Circuit, c: int, t: int) -> Circuit:
    """Controlled Hadamard through the S/V axis factorization; (1,2,2,0)."""
    _adjacent(c, t)
    emit_pi_s(circ, t)
    circ.h(t)
    emit_rz(circ, t, Angle.pi_frac(-5, 4))
    circ.cx(c, t)
    emit_rz(circ, t, Angle.pi_frac(5, 4))
    circ.h(t)
    emit_pi_s(circ, t)
    return circ


def cch_tilde(circ: Circuit, c1: int, c2: int, t: int) -> Circuit:
    """Hermitian doubly-controlled-H variant (CCH up to a residue and one CNOT).

    Three factors CPi_V(c1) CPi_S(c2) CPi_V(c1); (3,6,4,0).  c1 and c2 must
    both neighbor t.
    """
    _adjacent(c1, t)
    _adjacent(c2, t)
    circ.h(t).tdg(t).cx(c1, t).t(t).h(t)
    circ.tdg(t).cx(c2, t).t(t)
    circ.h(t).tdg(t).cx(c1, t).t(t).h(t)
    return circ


def pix_delta_case(
    circ: Circuit,
    case_id: int,
    theta,
    t: int,
    c_minus: Optional[int] = None,
    c_plus: Optional[int] = None,
    alpha: int = 0,
) -> Circuit:
    """Build one Table-1 implementation of MC Pi^theta_xbar up to a residue.

    Case ids follow the table: 1 (no controls), 2/4 (one control), 3/5/6
    (two controls).  ``alpha`` only affects case 5: the standalone variant
    (alpha=1) carries one extra CNOT that the boxed variant drops.
    """
    th = as_angle(theta)
    nctrl = (c_minus is not None) + (c_plus is not None)
    expected = {1: 0, 2: 1, 4: 1, 3: 2, 5: 2, 6: 2}[case_id]
    if nctrl != expected:
        raise ValueError(f"case {case_id} takes {expected} controls, got {nctrl}")
    c = c_minus if c_minus is not None else c_plus

    if case_id == 1:
        circ.h(t)
        emit_rz(circ, t, -th.scale(2))
        circ.h(t).z(t)
        return circ
    if case_id == 2:
        ch_gate(circ, c, t)
        emit_rz(circ, t, -th.scale(2))
        ch_gate(circ, c, t)
        return circ
    if case_id == 4:
        return c_pi_xbar(circ, c, t, th)
    if case_id == 3:
        cch_tilde(circ, c_minus, c_plus, t)
        emit_rz(circ, t, -th.scale(2))
        cch_tilde(circ, c_minus, c_plus, t)
        return circ
    if case_id == 5:
        if alpha:
            circ.cx(c_plus, t)
        circ.h(t)
        emit_rz(circ, t, -th)
        rp_toffoli(circ, c_minus, t, c_plus)
        emit_rz(circ, t, th)
        circ.h(t)
        return circ
    if case_id == 6:
        circ.h(t)
        emit_rz(circ, t, -th.half())
        circ.cx(c_minus, t)
        emit_rz(circ, t, th.half())
        circ.cx(c_plus, t)
        emit_rz(circ, t, -th.half())
        circ.cx(c_minus, t)
        emit_rz(circ, t, th.half())
        circ.h(t)
        return circ
    raise ValueError(f"unknown case id {case_id}")


def cciz(circ: Circuit, c1: int, c2: int, t: int, variant: str = "plain") -> Circuit:
    """Doubly-controlled iZ.

    plain: exact CC(iZ), 7 CNOTs and 4 T gates in T-depth 2.
    with_swap: CC(iZ) composed with SWAP(c1, c2), 6 CNOTs and 4 T gates;
    usable when the surrounding construction cancels the SWAPs.
    """
    _adjacent(c1, c2, t)
    if variant == "plain":
        circ.h(c2)
        circ.cx(c2, c1)
        circ.cx(t, c2)
        circ.s(c1).sdg(c2)
        circ.cx(c1, c2)
        circ.h(c1).t(c2).t(t)
        circ.cx(c1, c2)
        circ.cx(t, c2)
        circ.t(c1).tdg(c2)
        circ.cx(c2, c1)
        circ.cx(t, c2)
        return circ
    if variant == "with_swap":
        circ.cx(t, c2)
        circ.cx(c2, c1)
        circ.t(c2).tdg(t)
        circ.cx(t, c2)
        circ.cx(c1, c2)
        circ.tdg(c1).t(c2)
        circ.cx(c2, c1)
        circ.cx(t, c2)
        return circ
    raise ValueError(f"unknown cciz variant {variant!r}")


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LibraryEntry:
    """A fixed decomposition with its declared equivalence relation and cost."""

    name: str
    arity: int
    parametric: bool
    relation: str
    declared_cost: CostVector
    builder: Callable[..., Circuit]


def _entry_circuit(name: str, qubits: tuple[int, ...], theta=None) -> Circuit:
    """Instantiate a catalog entry on the given adjacent qubits."""
    circ = Circuit(max(qubits) + 1)
    ent = LIBRARY[name]
    if ent.parametric:
        ent.builder(circ, qubits, as_angle(theta))
    else:
        ent.builder(circ, qubits)
    return circ


def build_entry(name: str, qubits: tuple[int, ...], theta=None) -> Circuit:
    return _entry_circuit(name, qubits, theta)


def _mk(name, arity, parametric, relation, cost, fn) -> LibraryEntry:
    return LibraryEntry(name, arity, parametric, relation, CostVector(*cost), fn)


LIBRARY: dict[str, LibraryEntry] = {
    e.name: e
    for e in [
        _mk("pix_delta_1", 1, True, EXACT, (0, 0, 2, 1),
            lambda c, q, th: pix_delta_case(c, 1, th, q[0])),
        _mk("pix_delta_2", 2, True, DIAG_RESIDUE, (2, 4, 4, 1),
            lambda c, q, th: pix_delta_case(c, 2, th, q[1], c_minus=q[0])),
        _mk("pix_delta_3", 3, True, DIAG_RESIDUE, (6, 12, 8, 1),
            lambda c, q, th: pix_delta_case(c, 3, th, q[1], c_minus=q[0], c_plus=q[2])),
        _mk("pix_delta_4", 2, True, EXACT, (1, 0, 2, 2),
            lambda c, q, th: pix_delta_case(c, 4, th, q[1], c_minus=q[0])),
        _mk("pix_delta_5", 3, True, DIAG_RESIDUE, (4, 4, 4, 2),
            lambda c, q, th: pix_delta_case(c, 5, th, q[1], c_minus=q[0], c_plus=q[2], alpha=1)),
        _mk("pix_delta_5_boxed", 3, True, DIAG_RESIDUE_TRAILING_CX, (3, 4, 4, 2),
            lambda c, q, th: pix_delta_case(c, 5, th, q[1], c_minus=q[0], c_plus=q[2], alpha=0)),
        _mk("pix_delta_6", 3, True, DIAG_RESIDUE, (3, 0, 2, 4),
            lambda c, q, th: pix_delta_case(c, 6, th, q[1], c_minus=q[0], c_plus=q[2])),
        _mk("x_delta_0", 1, False, EXACT, (0, 0, 0, 0),
            lambda c, q: x_delta_small(c, q[0])),
        _mk("x_delta_1", 2, False, EXACT, (1, 0, 0, 0),
            lambda c, q: x_delta_small(c, q[1], c_minus=q[0])),
        _mk("rp_toffoli", 3, False, DIAG_RESIDUE, (3, 4, 2, 0),
            lambda c, q: rp_toffoli(c, q[0], q[1], q[2])),
        _mk("piv_delta_0", 1, False, EXACT, (0, 0, 1, 0),
            lambda c, q: piv_delta_small(c, q[0])),
        _mk("piv_delta_1", 2, False, EXACT, (1, 2, 2, 0),
            lambda c, q: piv_delta_small(c, q[1], c_minus=q[0])),
        _mk("piv_delta_2", 3, False, DIAG_RESIDUE_TRAILING_CX, (3, 6, 4, 0),
            lambda c, q: piv_delta_small(c, q[1], c_minus=q[0], c_plus=q[2])),
        _mk("cz_delta_seed", 3, False, DIAG_RESIDUE, (3, 0, 2, 0),
            lambda c, q: cz_delta_seed(c, q[0], q[1], q[2])),
        _mk("cciz", 3, False, EXACT, (7, 4, 2, 0),
            lambda c, q: cciz(c, q[0], q[1], q[2], "plain")),
        _mk("cciz_with_swap", 3, False, EXACT, (6, 4, 0, 0),
            lambda c, q: cciz(c, q[0], q[1], q[2], "with_swap")),
        _mk("cnot_mid", 3, False, EXACT, (4, 0, 0, 0),
            lambda c, q: cnot_mid(c, q[0], q[1], q[2])),
        _mk("ch", 2, False, EXACT, (1, 2, 2, 0),
            lambda c, q: ch_gate(c, q[0], q[1])),
        _mk("cch_tilde", 3, False, DIAG_RESIDUE_TRAILING_CX, (3, 6, 4, 0),
            lambda c, q: cch_tilde(c, q[0], q[2], q[1])),
        _mk("cz_seed", 2, False, EXACT, (1, 0, 2, 0),
            lambda c, q: cz_gate(c, q[0], q[1])),
    ]
}
