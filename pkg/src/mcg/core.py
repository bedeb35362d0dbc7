"""Core IR: angles, axes, gates, circuits, cost/depth vectors, synthesis specs.

All values are immutable after construction and safe to share across workers.
Qubit indexing is 0-based with index 0 at the top of circuit drawings; a
register reversal maps i to k-1-i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional


# ---------------------------------------------------------------------------
# Angles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Angle:
    """An angle in radians, tracked exactly when it is a rational multiple of pi.

    ``frac`` is the multiple of pi (``angle = frac * pi``) or None for a
    generic float angle stored in ``value``.  Exactness matters: T/S/Z special
    cases must be detected without float comparisons.
    """

    frac: Optional[Fraction]
    value: float

    @staticmethod
    def pi_frac(num: int | Fraction, den: int = 1) -> "Angle":
        f = Fraction(num, den)
        return Angle(f, float(f) * math.pi)

    @staticmethod
    def flt(x: float) -> "Angle":
        return Angle(None, float(x))

    @staticmethod
    def zero() -> "Angle":
        return Angle.pi_frac(0)

    @property
    def is_rational(self) -> bool:
        return self.frac is not None

    def is_zero(self) -> bool:
        if self.frac is not None:
            return self.frac == 0
        return self.value == 0.0

    def __neg__(self) -> "Angle":
        if self.frac is not None:
            return Angle.pi_frac(-self.frac)
        return Angle.flt(-self.value)

    def __add__(self, other: "Angle") -> "Angle":
        if self.frac is not None and other.frac is not None:
            return Angle.pi_frac(self.frac + other.frac)
        return Angle.flt(self.value + other.value)

    def __sub__(self, other: "Angle") -> "Angle":
        return self + (-other)

    def scale(self, r: int | Fraction) -> "Angle":
        if self.frac is not None:
            return Angle.pi_frac(self.frac * Fraction(r))
        return Angle.flt(self.value * float(r))

    def half(self) -> "Angle":
        return self.scale(Fraction(1, 2))

    def quarter_turns(self) -> Optional[int]:
        """Return m in 0..7 when the angle is exactly m*pi/4 mod 2*pi, else None."""
        if self.frac is None:
            return None
        q = self.frac * 4  # in units of pi/4
        if q.denominator != 1:
            return None
        return q.numerator % 8

    def wrapped(self, period_pi: int = 4) -> "Angle":
        """Wrap into (-period_pi/2, period_pi/2] multiples of pi (default (-2pi, 2pi])."""
        half = Fraction(period_pi, 2)
        if self.frac is not None:
            f = self.frac % period_pi
            if f > half:
                f -= period_pi
            return Angle.pi_frac(f)
        p = period_pi * math.pi
        v = math.fmod(self.value, p)
        if v <= -p / 2:
            v += p
        elif v > p / 2:
            v -= p
        return Angle.flt(v)

    def approx(self, other: "Angle", tol: float = 1e-12) -> bool:
        return abs(self.value - other.value) <= tol


def as_angle(x: "Angle | float | int | Fraction") -> Angle:
    if isinstance(x, Angle):
        return x
    if isinstance(x, Fraction):
        return Angle.pi_frac(x)
    return Angle.flt(float(x))


# ---------------------------------------------------------------------------
# Bloch-sphere axes
# ---------------------------------------------------------------------------

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class UnitVector:
    """A point on the Bloch sphere (Euclidean norm 1 within 1e-12)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"axis must be unit length, got norm {n}")
        if abs(n - 1.0) > _NORM_TOL:
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)
            object.__setattr__(self, "z", self.z / n)

    @staticmethod
    def normalized(x: float, y: float, z: float) -> "UnitVector":
        n = math.sqrt(x * x + y * y + z * z)
        if n < 1e-14:
            raise ValueError("cannot normalize the zero vector")
        return UnitVector(x / n, y / n, z / n)

    @staticmethod
    def from_spherical(theta: float, phi: float) -> "UnitVector":
        return UnitVector(
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )

    def spherical(self) -> tuple[float, float]:
        """(theta, phi): theta from +z, phi from +x in the xy plane."""
        theta = math.atan2(math.hypot(self.x, self.y), self.z)
        phi = math.atan2(self.y, self.x)
        return theta, phi

    def dot(self, o: "UnitVector") -> float:
        return self.x * o.x + self.y * o.y + self.z * o.z

    def __neg__(self) -> "UnitVector":
        return UnitVector(-self.x, -self.y, -self.z)

    def approx(self, o: "UnitVector", tol: float = 1e-10) -> bool:
        return (
            abs(self.x - o.x) <= tol
            and abs(self.y - o.y) <= tol
            and abs(self.z - o.z) <= tol
        )

    def tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


X_AXIS = UnitVector(1.0, 0.0, 0.0)
Y_AXIS = UnitVector(0.0, 1.0, 0.0)
Z_AXIS = UnitVector(0.0, 0.0, 1.0)

_S2 = 1.0 / math.sqrt(2.0)
V_H = UnitVector(_S2, 0.0, _S2)            # midpoint of x and z; the Hadamard axis
V_S = UnitVector(_S2, _S2, 0.0)            # R_z(pi/4) x
V_V = UnitVector(0.0, -_S2, _S2)           # R_x(pi/4) z
V_T = UnitVector.normalized(1.0 + _S2, _S2, 0.0)
V_TX = UnitVector.normalized(0.0, -_S2, 1.0 + _S2)


def v_xbar(theta: float) -> UnitVector:
    """R_x(theta) z: axis in the plane perpendicular to x."""
    return UnitVector(0.0, -math.sin(theta), math.cos(theta))


def v_ybar(theta: float) -> UnitVector:
    """R_y(theta) z."""
    return UnitVector(math.sin(theta), 0.0, math.cos(theta))


def v_zbar(phi: float) -> UnitVector:
    """R_z(phi) x: equatorial axis at azimuth phi."""
    return UnitVector(math.cos(phi), math.sin(phi), 0.0)


# ---------------------------------------------------------------------------
# Gates and circuits
# ---------------------------------------------------------------------------

class GateKind(Enum):
    CX = "cx"
    H = "h"
    T = "t"
    TDG = "tdg"
    S = "s"
    SDG = "sdg"
    X = "x"
    Y = "y"
    Z = "z"
    RZ = "rz"
    RX = "rx"
    SWAP = "swap"

    @property
    def n_qubits(self) -> int:
        return 2 if self in (GateKind.CX, GateKind.SWAP) else 1

    @property
    def has_angle(self) -> bool:
        return self in (GateKind.RZ, GateKind.RX)


_ADJOINT_KIND = {
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: Optional[Angle] = None

    def __post_init__(self):
        if len(self.qubits) != self.kind.n_qubits:
            raise ValueError(f"{self.kind.value} takes {self.kind.n_qubits} qubits")
        if self.kind.n_qubits == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError("two-qubit gate needs distinct qubits")
        if self.kind.has_angle != (self.angle is not None):
            raise ValueError(f"{self.kind.value}: angle mismatch")

    def adjoint(self) -> "Gate":
        if self.kind in _ADJOINT_KIND:
            return Gate(_ADJOINT_KIND[self.kind], self.qubits)
        if self.angle is not None:
            return Gate(self.kind, self.qubits, -self.angle)
        return self

    def reindexed(self, mapping) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle)


class Circuit:
    """An ordered gate list over k LNN-ordered qubits.

    LNN validity (every 2-qubit gate on adjacent indices) is checked by the
    verifier, not forced at construction, so pre-routing intermediates exist.
    """

    def __init__(self, k: int, gates: Iterable[Gate] = ()):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.gates: list[Gate] = []
        for g in gates:
            self.append(g)

    # -- construction helpers ------------------------------------------------

    def append(self, gate: Gate) -> "Circuit":
        for q in gate.qubits:
            if not (0 <= q < self.k):
                raise ValueError(f"qubit {q} out of range for k={self.k}")
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def cx(self, c: int, t: int) -> "Circuit":
        return self.append(Gate(GateKind.CX, (c, t)))

    def h(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.H, (q,)))

    def t(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.T, (q,)))

    def tdg(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.TDG, (q,)))

    def s(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.S, (q,)))

    def sdg(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.SDG, (q,)))

    def x(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.X, (q,)))

    def y(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.Y, (q,)))

    def z(self, q: int) -> "Circuit":
        return self.append(Gate(GateKind.Z, (q,)))

    def rz(self, q: int, angle) -> "Circuit":
        return self.append(Gate(GateKind.RZ, (q,), as_angle(angle)))

    def rx(self, q: int, angle) -> "Circuit":
        return self.append(Gate(GateKind.RX, (q,), as_angle(angle)))

    def swap(self, a: int, b: int) -> "Circuit":
        return self.append(Gate(GateKind.SWAP, (a, b)))

    # -- structural operations ----------------------------------------------

    def copy(self) -> "Circuit":
        return Circuit(self.k, self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.k != self.k:
            raise ValueError("circuit sizes differ")
        return Circuit(self.k, self.gates + other.gates)

    def adjoint(self) -> "Circuit":
        return Circuit(self.k, (g.adjoint() for g in reversed(self.gates)))

    def reindexed(self, mapping, k: Optional[int] = None) -> "Circuit":
        return Circuit(k if k is not None else self.k,
                       (g.reindexed(mapping) for g in self.gates))

    def reversed_register(self) -> "Circuit":
        k = self.k
        return self.reindexed({i: k - 1 - i for i in range(k)})

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.k == other.k
            and self.gates == other.gates
        )

    def __repr__(self) -> str:
        return f"Circuit(k={self.k}, gates={len(self.gates)})"


# ---------------------------------------------------------------------------
# Cost and depth vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CostVector:
    """(CNOT, T, H, Rz) gate counts."""

    cx: int = 0
    t: int = 0
    h: int = 0
    rz: int = 0

    def __add__(self, o: "CostVector") -> "CostVector":
        return CostVector(self.cx + o.cx, self.t + o.t, self.h + o.h, self.rz + o.rz)

    def __sub__(self, o: "CostVector") -> "CostVector":
        return CostVector(self.cx - o.cx, self.t - o.t, self.h - o.h, self.rz - o.rz)

    def __mul__(self, n: int) -> "CostVector":
        return CostVector(self.cx * n, self.t * n, self.h * n, self.rz * n)

    __rmul__ = __mul__

    def __le__(self, o: "CostVector") -> bool:
        return (
            self.cx <= o.cx and self.t <= o.t and self.h <= o.h and self.rz <= o.rz
        )

    def tuple(self) -> tuple[int, int, int, int]:
        return (self.cx, self.t, self.h, self.rz)


@dataclass(frozen=True)
class DepthVector:
    """Per-gate-type circuit depth under greedy as-soon-as-possible layering."""

    cx: int = 0
    t: int = 0
    h: int = 0
    rz: int = 0

    def __sub__(self, o: "DepthVector") -> "DepthVector":
        return DepthVector(self.cx - o.cx, self.t - o.t, self.h - o.h, self.rz - o.rz)

    def tuple(self) -> tuple[int, int, int, int]:
        return (self.cx, self.t, self.h, self.rz)


_GATE_COST = {
    GateKind.CX: CostVector(cx=1),
    GateKind.H: CostVector(h=1),
    GateKind.T: CostVector(t=1),
    GateKind.TDG: CostVector(t=1),
    GateKind.RZ: CostVector(rz=1),
    GateKind.RX: CostVector(h=2, rz=1),  # realized H Rz H at export
    GateKind.SWAP: CostVector(cx=3),     # a SWAP surviving to output is 3 CNOTs
    GateKind.S: CostVector(),
    GateKind.SDG: CostVector(),
    GateKind.X: CostVector(),
    GateKind.Y: CostVector(),
    GateKind.Z: CostVector(),
}


def cost_of(circuit: Circuit) -> CostVector:
    """Exact (CNOT, T, H, Rz) tally of a circuit."""
    total = CostVector()
    for g in circuit.gates:
        total = total + _GATE_COST[g.kind]
    return total


_TYPE_OF = {
    GateKind.CX: "cx",
    GateKind.SWAP: "cx",
    GateKind.T: "t",
    GateKind.TDG: "t",
    GateKind.H: "h",
    GateKind.RZ: "rz",
}


def depth_of(circuit: Circuit) -> DepthVector:
    """Per-gate-type depth: greedy as-soon-as-possible layering where only
    gates of the counted type occupy a slot (the standard T-depth notion,
    applied to each of CX/T/H/Rz).

    Gates commute into one layer iff their qubit supports are disjoint.
    SWAP counts as a CX slot; RX counts as one H-then-Rz-then-H run.
    """
    fronts = {name: [0] * circuit.k for name in ("cx", "t", "h", "rz")}
    totals = dict.fromkeys(fronts, 0)
    for g in circuit.gates:
        for name, front in fronts.items():
            w = 0
            if _TYPE_OF.get(g.kind) == name:
                w = 1
            elif g.kind is GateKind.RX and name in ("h", "rz"):
                w = 2 if name == "h" else 1
            depth = max(front[q] for q in g.qubits) + w
            for q in g.qubits:
                front[q] = depth
            totals[name] = max(totals[name], depth)
    return DepthVector(totals["cx"], totals["t"], totals["h"], totals["rz"])


# ---------------------------------------------------------------------------
# Synthesis requests
# ---------------------------------------------------------------------------

class McKind(Enum):
    MCX = "mcx"
    MCZ = "mcz"
    MCP = "mcp"
    MCSU2 = "mcsu2"
    MCPI = "mcpi"
    MCX_DELTA = "mcx-delta"
    MCPIX_DELTA = "mcpix-delta"
    MCZ_DELTA = "mcz-delta"


# Kinds whose construction routes through the dirty-ancilla core.
ANCILLA_KINDS = frozenset({McKind.MCX, McKind.MCZ, McKind.MCP, McKind.MCPI})


class SpecError(ValueError):
    """A synthesis request violating a stated invariant."""


@dataclass(frozen=True)
class McGateSpec:
    """A synthesis request over a k-qubit LNN window.

    The window is the smallest contiguous span containing every qubit of
    interest: indices 0 and k-1 must belong to controls+target (plus the
    ancilla for the ancilla-using kinds).
    """

    kind: McKind
    k: int
    controls: frozenset[int]
    target: int
    ancilla: Optional[int] = None
    axis: Optional[UnitVector] = None
    angle: Optional[Angle] = None

    def __init__(self, kind, k, controls, target, ancilla=None, axis=None, angle=None):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "controls", frozenset(int(c) for c in controls))
        object.__setattr__(self, "target", int(target))
        object.__setattr__(self, "ancilla", None if ancilla is None else int(ancilla))
        object.__setattr__(self, "axis", axis)
        object.__setattr__(
            self, "angle", None if angle is None else as_angle(angle)
        )

    @property
    def n(self) -> int:
        return len(self.controls)

    def qubits_of_interest(self) -> frozenset[int]:
        qs = set(self.controls) | {self.target}
        if self.ancilla is not None:
            qs.add(self.ancilla)
        return frozenset(qs)

    def reversed(self) -> "McGateSpec":
        r = self.k - 1
        return McGateSpec(
            self.kind,
            self.k,
            frozenset(r - c for c in self.controls),
            r - self.target,
            None if self.ancilla is None else r - self.ancilla,
            self.axis,
            self.angle,
        )


def validate_spec(spec: McGateSpec) -> None:
    """Reject any request violating the window convention or role overlaps."""
    k, n = spec.k, spec.n
    for q in spec.qubits_of_interest():
        if not (0 <= q < k):
            raise SpecError(f"qubit {q} outside register of size {k}")
    if spec.target in spec.controls:
        raise SpecError("target overlaps controls")
    if spec.ancilla is not None:
        if spec.ancilla in spec.controls or spec.ancilla == spec.target:
            raise SpecError("ancilla overlaps controls or target")
    kind = spec.kind
    if n < 1 and kind not in (McKind.MCX_DELTA, McKind.MCPIX_DELTA):
        raise SpecError("at least one control required")
    ct = set(spec.controls) | {spec.target}
    if kind in ANCILLA_KINDS:
        ends = ct | ({spec.ancilla} if spec.ancilla is not None else set())
        if 0 not in ends or k - 1 not in ends:
            raise SpecError(
                "window must be the smallest span holding controls, target and ancilla"
            )
        if k < n + 2 and not (n == 1 and k == 2):
            raise SpecError(f"{kind.value} needs k >= n+2 (one dirty ancilla)")
        if kind is McKind.MCP and spec.angle is None:
            raise SpecError("mcp needs an angle")
        if kind is McKind.MCPI and spec.axis is None:
            raise SpecError("mcpi needs an axis")
    elif kind is McKind.MCSU2:
        if spec.ancilla is not None:
            raise SpecError("mcsu2 takes no ancilla")
        if 0 not in ct or k - 1 not in ct:
            raise SpecError("window must be the smallest span holding controls and target")
        if k < n + 1:
            raise SpecError("mcsu2 needs k >= n+1")
        if spec.axis is None or spec.angle is None:
            raise SpecError("mcsu2 needs an axis and an angle")
    elif kind in (McKind.MCX_DELTA, McKind.MCPIX_DELTA):
        if spec.ancilla is not None:
            raise SpecError(f"{kind.value} takes no ancilla")
        if spec.target not in (0, 1):
            raise SpecError(f"{kind.value} target must be at the top or one below it")
        if spec.target == 1 and 0 not in spec.controls:
            raise SpecError("with target at index 1, index 0 must be a control")
        if k - 1 not in ct:
            raise SpecError("window must end on a control or the target")
        if kind is McKind.MCPIX_DELTA and spec.angle is None:
            raise SpecError("mcpix-delta needs an angle")
    elif kind is McKind.MCZ_DELTA:
        if spec.ancilla is not None:
            raise SpecError("mcz-delta takes no ancilla")
        if spec.target not in (0, k - 1):
            raise SpecError("mcz-delta target must sit at a window end")
        quasi = k - 2 if spec.target == k - 1 else 1
        far_end = 0 if spec.target == k - 1 else k - 1
        if quasi in spec.controls:
            raise SpecError("the qubit next to the mcz-delta target is a quasi-ancilla")
        if far_end not in spec.controls:
            raise SpecError("the window end opposite the target must be a control")
        if k < 3:
            raise SpecError("mcz-delta needs k >= 3")
    else:  # pragma: no cover
        raise SpecError(f"unknown kind {kind}")
