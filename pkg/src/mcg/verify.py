"""Ground truth: dense unitary simulation, reference unitaries, equivalence checks.

Basis ordering: qubit 0 is the most significant bit, everywhere.  The
simulation cap defaults to 13 qubits (8192^2 complex doubles transient) and
can be lowered through the MCG_VERIFY_CAP environment variable.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Circuit, Gate, GateKind, McGateSpec, McKind, UnitVector
from .rotations import pi_matrix, rx_matrix, rz_matrix, su2_rotation

DEFAULT_CAP = 13
COMPARE_TOL = 1e-9

_T_PHASE = np.exp(1j * math.pi / 4)
_FIXED_1Q = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    GateKind.T: np.array([[1, 0], [0, _T_PHASE]], dtype=complex),
    GateKind.TDG: np.array([[1, 0], [0, _T_PHASE.conjugate()]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def verify_cap() -> int:
    return int(os.environ.get("MCG_VERIFY_CAP", DEFAULT_CAP))


def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.kind in _FIXED_1Q:
        return _FIXED_1Q[gate.kind]
    if gate.kind is GateKind.RZ:
        return rz_matrix(gate.angle.value)
    if gate.kind is GateKind.RX:
        return rx_matrix(gate.angle.value)
    if gate.kind is GateKind.CX:
        return _CX
    if gate.kind is GateKind.SWAP:
        return _SWAP
    raise ValueError(f"no matrix for {gate.kind}")  # pragma: no cover


def _apply(u: np.ndarray, mat: np.ndarray, qubits: tuple[int, ...], k: int) -> np.ndarray:
    """Left-multiply the gate embedding onto the running unitary u."""
    m = len(qubits)
    tensor = u.reshape([2] * k + [2 ** k])
    axes = list(qubits)
    gt = mat.reshape([2] * (2 * m))
    tensor = np.tensordot(gt, tensor, axes=(list(range(m, 2 * m)), axes))
    # tensordot moved the acted-on axes to the front; restore positions
    rest = [ax for ax in range(k + 1) if ax not in axes]
    perm = [0] * (k + 1)
    for pos, ax in enumerate(axes):
        perm[ax] = pos
    for pos, ax in enumerate(rest):
        perm[ax] = m + pos
    tensor = np.transpose(tensor, [perm[i] for i in range(k + 1)])
    return tensor.reshape(2 ** k, 2 ** k)


def simulate(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the circuit (time order left to right)."""
    k = circuit.k
    cap = verify_cap()
    if k > cap:
        raise ValueError(f"k={k} exceeds simulation cap {cap}")
    u = np.eye(2 ** k, dtype=complex)
    for g in circuit.gates:
        u = _apply(u, gate_matrix(g), g.qubits, k)
    return u


def check_lnn(circuit: Circuit) -> tuple[bool, Optional[int]]:
    """True iff every 2-qubit gate acts on adjacent indices; else first offender."""
    for i, g in enumerate(circuit.gates):
        if len(g.qubits) == 2 and abs(g.qubits[0] - g.qubits[1]) != 1:
            return False, i
    return True, None


def _bit(index: int, q: int, k: int) -> int:
    return (index >> (k - 1 - q)) & 1


def reference_unitary(spec: McGateSpec) -> np.ndarray:
    """Direct construction of the ideal gate named by the spec.

    Relative-phase kinds return the exact (non-relative) reference; the
    residue is extracted by compare.
    """
    k = spec.k
    if k > verify_cap():
        raise ValueError(f"k={k} exceeds simulation cap {verify_cap()}")
    dim = 2 ** k
    kind = spec.kind

    if kind in (McKind.MCZ, McKind.MCZ_DELTA, McKind.MCP):
        phase = -1.0 if kind is not McKind.MCP else np.exp(1j * spec.angle.value)
        diag = np.ones(dim, dtype=complex)
        members = set(spec.controls) | {spec.target}
        for b in range(dim):
            if all(_bit(b, q, k) for q in members):
                diag[b] = phase
        return np.diag(diag)

    if kind in (McKind.MCX, McKind.MCX_DELTA):
        block = _FIXED_1Q[GateKind.X]
    elif kind is McKind.MCSU2:
        block = su2_rotation(spec.axis, spec.angle.value)
    elif kind is McKind.MCPI:
        block = pi_matrix(spec.axis)
    elif kind is McKind.MCPIX_DELTA:
        th = spec.angle.value
        block = pi_matrix(UnitVector(0.0, -math.sin(th), math.cos(th)))
    else:  # pragma: no cover
        raise ValueError(f"no reference for {kind}")

    u = np.zeros((dim, dim), dtype=complex)
    t = spec.target
    for b in range(dim):
        if all(_bit(b, c, k) for c in spec.controls):
            tb = _bit(b, t, k)
            for nb in (0, 1):
                src = b if nb == tb else b ^ (1 << (k - 1 - t))
                u[b, src] += block[tb, nb]
        else:
            u[b, b] = 1.0
    return u


@dataclass(frozen=True)
class EquivalenceReport:
    relation: str  # "exact" | "global_phase" | "diag_residue" | "none"
    passed: bool
    max_abs_deviation: float
    global_phase: Optional[complex] = None
    residual_diag: Optional[np.ndarray] = None
    target_independent: Optional[bool] = None

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = ""
        if self.global_phase is not None:
            extra = f", phase={self.global_phase:.6f}"
        if self.target_independent is not None:
            extra += f", target_independent={self.target_independent}"
        return f"{self.relation}: {status} (dev={self.max_abs_deviation:.3e}{extra})"


def compare(
    u: np.ndarray,
    v: np.ndarray,
    mode: str = "exact",
    target_bit: Optional[int] = None,
    tol: float = COMPARE_TOL,
) -> EquivalenceReport:
    """Compare two unitaries.

    exact: max |u - v|.  global_phase: minimized over a unit phase.
    diag_residue: v u^dag must be diagonal with unit-modulus entries; with
    target_bit set, entries must also agree on basis-state pairs differing
    only in that bit.
    """
    if u.shape != v.shape:
        raise ValueError("dimension mismatch")
    if mode == "exact":
        dev = float(np.max(np.abs(u - v)))
        return EquivalenceReport("exact", dev <= tol, dev)
    if mode == "global_phase":
        i, j = np.unravel_index(np.argmax(np.abs(u)), u.shape)
        phase = v[i, j] / u[i, j]
        mag = abs(phase)
        if mag < 1e-6:
            return EquivalenceReport("global_phase", False, float("inf"))
        phase = phase / mag
        dev = float(np.max(np.abs(v - phase * u)))
        return EquivalenceReport("global_phase", dev <= tol, dev, global_phase=phase)
    if mode == "diag_residue":
        d = v @ u.conj().T
        diag = np.diag(d).copy()
        off = float(np.max(np.abs(d - np.diag(diag))))
        unit = float(np.max(np.abs(np.abs(diag) - 1.0)))
        dev = max(off, unit)
        indep = None
        if target_bit is not None:
            k = int(round(math.log2(u.shape[0])))
            mask = 1 << (k - 1 - target_bit)
            pairs = [(b, b | mask) for b in range(u.shape[0]) if not b & mask]
            dmax = max(abs(diag[a] - diag[c]) for a, c in pairs)
            indep = dmax <= tol
            dev = max(dev, 0.0)
        passed = off <= tol and unit <= tol and (indep is not False)
        return EquivalenceReport(
            "diag_residue", passed, dev, residual_diag=diag, target_independent=indep
        )
    raise ValueError(f"unknown mode {mode!r}")
