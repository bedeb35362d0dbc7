"""Closed-form gate-count model: per-case formulas, upper bounds, benchmark curves.

Predictions are defined only for partitions the synthesizer can actually
select; inconsistent partitions are refused rather than extrapolated.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import CostVector


@dataclass(frozen=True)
class NPlusMinusStats:
    """Derived combinations of the neighbor-control indicators n+ and n-."""

    n_plus: int
    n_minus: int

    def __post_init__(self):
        if self.n_plus not in (0, 1) or self.n_minus not in (0, 1):
            raise ValueError("n_plus and n_minus are 0/1 indicators")

    @property
    def p1(self) -> int:  # (n±)₁
        return self.n_plus * self.n_minus

    @property
    def p3(self) -> int:  # (n±)₃
        return self.n_plus + self.n_minus + self.p1

    @property
    def b1(self) -> int:  # (n̄±)₁
        return self.n_plus + self.n_minus - self.p1

    @property
    def b3(self) -> int:  # (n̄±)₃
        return 2 * (self.n_plus + self.n_minus) - self.p1

    @property
    def b5(self) -> int:  # (n̄±)₅
        return 3 * (self.n_plus + self.n_minus) - self.p1


def predict_mcz_delta(k1: int, n1: int) -> CostVector:
    """Closed form for the relative-phase MCZ V-chain over k1+2 qubits."""
    if not (1 <= n1 <= k1):
        raise ValueError(f"need 1 <= n1 <= k1, got n1={n1}, k1={k1}")
    return CostVector(2 * k1 + 4 * n1 - 3, 8 * n1 - 8, 4 * n1 - 2, 0)


def mcz_delta_recursive(k1: int, n1: int) -> CostVector:
    """Iterate the V-chain recursion from its 3-qubit seed.

    Each recursion level adds a mirrored pair of relative-phase Toffolis
    (controlled steps) or CNOTs (free steps); 2(n1-1) of the former and
    2(k1-n1) of the latter in total.
    """
    if not (1 <= n1 <= k1):
        raise ValueError(f"need 1 <= n1 <= k1, got n1={n1}, k1={k1}")
    total = CostVector(3, 0, 2, 0)
    toffoli = CostVector(3, 4, 2, 0)
    cnot = CostVector(1, 0, 0, 0)
    remaining_controls = n1 - 1
    for _ in range(k1 - 1):
        step = toffoli if remaining_controls > 0 else cnot
        if remaining_controls > 0:
            remaining_controls -= 1
        total = total + 2 * step
    return total


def x_delta_small(n_plus: int, n_minus: int) -> CostVector:
    s = NPlusMinusStats(n_plus, n_minus)
    return CostVector(s.p3, 4 * s.p1, 2 * s.p1, 0)


def piv_delta_box(n_plus: int, n_minus: int) -> CostVector:
    s = NPlusMinusStats(n_plus, n_minus)
    return CostVector(s.p3, 2 * s.p3, 1 + s.p3, 0)


def pix_delta_small(n_plus: int, n_minus: int) -> CostVector:
    """Small MC Pi_xbar implementations in the one-arbitrary-Rz family."""
    s = NPlusMinusStats(n_plus, n_minus)
    return CostVector(2 * s.p3, 4 * s.p3, 2 * (1 + s.p3), 1)


def predict_x_delta(k2: int, n2: int, n_plus: int, n_minus: int) -> CostVector:
    if n2 == 0:
        if k2 != 0:
            raise ValueError("n2 = 0 requires k2 = 0")
        return x_delta_small(n_plus, n_minus)
    s = NPlusMinusStats(n_plus, n_minus)
    if k2 < n2:
        raise ValueError("need k2 >= n2")
    return CostVector(
        2 * k2 + 4 * n2 - 3 + 2 * s.p3,
        8 * n2 - 8 + 4 * s.p3,
        4 * n2 + 2 * s.p3,
        0,
    )


def predict_pix_delta(k2: int, n2: int, n_plus: int, n_minus: int) -> CostVector:
    if n2 == 0:
        if k2 != 0:
            raise ValueError("n2 = 0 requires k2 = 0")
        return pix_delta_small(n_plus, n_minus)
    s = NPlusMinusStats(n_plus, n_minus)
    if k2 < n2:
        raise ValueError("need k2 >= n2")
    return CostVector(
        2 * k2 + 4 * n2 - 3 + 4 * s.p3,
        8 * n2 - 8 + 8 * s.p3,
        4 * n2 + 2 + 4 * s.p3,
        2,
    )


def _check_mcx_partition(k, n, k1, k2, n1, n2, s: NPlusMinusStats) -> None:
    if n1 + n2 != n + 1 - s.n_plus - s.n_minus:
        raise ValueError("partition does not add up to n+1 controls")
    if n1 > 0 and n2 > 0 and k1 + k2 != k - 3:
        raise ValueError("interior pivot requires k1+k2 = k-3")
    if n1 > 0 and n2 == 0:
        if k2 != 0 or k1 != k - 2 - s.n_plus:
            raise ValueError("n2 = 0 requires k2 = 0 and k1 = k-2-n_plus")
    if k1 < n1 or k2 < n2:
        raise ValueError("more controls than window slots")


def predict_mcx(k: int, n: int, k1: int, k2: int, n1: int, n2: int,
                n_plus: int, n_minus: int) -> CostVector:
    """Per-case MCX cost (exact formula value for the chosen partition)."""
    s = NPlusMinusStats(n_plus, n_minus)
    _check_mcx_partition(k, n, k1, k2, n1, n2, s)
    if n1 == 0 and n2 == 0:
        return CostVector(4, 0, 0, 0)
    if n1 > 0 and n2 > 0:
        return CostVector(
            4 * k + 8 * n - 16 - 4 * s.b1,
            16 * n - 16 - 8 * s.b1,
            8 * n + 8 - 4 * s.b1,
            0,
        )
    if n1 > 0 and n2 == 0:
        return CostVector(
            4 * k + 8 * n - 6 - 2 * s.b5 - 4 * s.n_plus,
            16 * n - 8 * s.b3,
            8 * n + 8 - 4 * s.b3,
            0,
        )
    raise ValueError("n1 = 0 partitions are normalized away by register reversal")


def upper_mcx(k: int, n: int) -> CostVector:
    return CostVector(4 * k + 8 * n - 16, 16 * n - 16, 8 * n + 4, 0)


def mcsu2_small(n_plus: int, n_minus: int) -> CostVector:
    total = n_plus + n_minus
    if total == 1:
        return CostVector(2, 0, 8, 6)
    if total == 2:
        return CostVector(6, 8, 14, 6)
    raise ValueError("small MCSU2 case requires n+ + n- in {1, 2}")


def predict_mcsu2(k: int, n: int, k1: int, k2: int, n1: int, n2: int,
                  n_plus: int, n_minus: int) -> CostVector:
    """Per-case MCSU2 cost for the chosen partition (one-arbitrary-Rz family)."""
    s = NPlusMinusStats(n_plus, n_minus)
    if n1 + n2 != n - s.n_plus - s.n_minus:
        raise ValueError("partition does not add up to n controls")
    if n1 == 0 and n2 == 0:
        return mcsu2_small(n_plus, n_minus)
    if n1 > 0 and n2 > 0 and k1 + k2 != k - 3:
        raise ValueError("interior target requires k1+k2 = k-3")
    if n1 > 0 and n2 == 0 and (k2 != 0 or k1 != k - 2 - s.n_plus):
        raise ValueError("n2 = 0 requires k2 = 0 and k1 = k-2-n_plus")
    if k1 < n1 or k2 < n2:
        raise ValueError("more controls than window slots")
    if n1 > 0 and n2 > 0:
        return CostVector(
            4 * k + 8 * n - 24 + 8 * s.p1,
            16 * n - 32 + 16 * s.p1,
            8 * n + 4 + 8 * s.p1,
            8,
        )
    if n1 > 0 and n2 == 0:
        return CostVector(
            4 * k + 8 * n - 14 - 4 * (s.b1 + s.n_plus),
            16 * n - 16 - 8 * s.b1,
            8 * n - 4 * s.b1,
            6,
        )
    raise ValueError("n1 = 0 partitions are normalized away by register reversal")


def upper_mcsu2(k: int, n: int) -> CostVector:
    return CostVector(4 * k + 8 * n - 14, 16 * n - 16, 8 * n + 12, 8)


def predict_mcsu2_barenco(k: int, n: int) -> CostVector:
    """Cost of the 5-Rz path: two target-clean relative-phase MCX blocks plus
    the three-factor single-qubit decomposition."""
    return CostVector(4 * k + 8 * n - 14, 16 * n - 16, 8 * n + 4, 5)


# Benchmark comparison curves (CNOT counts), evaluated from the same model.

def longrange_cnot_cx(m: int) -> int:
    """CNOT count of a single long-range CNOT over m LNN qubits."""
    if m < 2:
        raise ValueError("need m >= 2")
    if m == 2:
        return 1
    return 4 * m - 8


def ata_mcx_cx(n: int) -> int:
    """The 12n-class all-to-all MCX curve (one dirty ancilla)."""
    return 12 * n
