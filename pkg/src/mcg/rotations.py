"""SU(2)/pi-rotation algebra: matrices, rotation splits, axis transforms.

Everything here is plain 2x2/3x3 numpy with tolerances 1e-12 for raw
construction and 1e-10 for composed identities.
"""
from __future__ import annotations

import math

import numpy as np

from .core import UnitVector, V_H, V_S, V_V, X_AXIS, Z_AXIS

CONSTRUCTION_TOL = 1e-12
IDENTITY_TOL = 1e-10

_I2 = np.eye(2, dtype=complex)
_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def su2_rotation(axis: UnitVector, lam: float) -> np.ndarray:
    """R_axis(lam) = cos(lam/2) I - i sin(lam/2) (axis . sigma)."""
    ndots = axis.x * _PAULI["x"] + axis.y * _PAULI["y"] + axis.z * _PAULI["z"]
    return math.cos(lam / 2) * _I2 - 1j * math.sin(lam / 2) * ndots


def pi_matrix(axis: UnitVector) -> np.ndarray:
    """The Hermitian pi-rotation i R_axis(pi) = axis . sigma."""
    return np.array(
        [[axis.z, axis.x - 1j * axis.y], [axis.x + 1j * axis.y, -axis.z]],
        dtype=complex,
    )


def rz_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex
    )


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def so3_matrix(axis: UnitVector, theta: float) -> np.ndarray:
    """Rodrigues rotation matrix by theta about axis."""
    n = np.array(axis.tuple())
    kmat = np.array(
        [[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]], dtype=float
    )
    return np.eye(3) + math.sin(theta) * kmat + (1 - math.cos(theta)) * (kmat @ kmat)


def rotate_axis(tau: UnitVector, sigma: UnitVector, theta: float) -> UnitVector:
    """Rodrigues rotation of tau about sigma by theta.

    When tau is perpendicular to sigma this realizes the conjugation identity
    R_sigma(theta) Pi(tau) R_sigma(theta)^dag = Pi(rotated tau).
    """
    v = so3_matrix(sigma, theta) @ np.array(tau.tuple())
    return UnitVector.normalized(*v)


def perp_axis(v: UnitVector) -> UnitVector:
    """Canonical unit vector perpendicular to v.

    Project z off v when they are not parallel, else fall back to x; a fixed
    pick keeps output circuits reproducible.
    """
    d = v.z  # z . v
    rx, ry, rz_ = -d * v.x, -d * v.y, 1.0 - d * v.z
    n = math.sqrt(rx * rx + ry * ry + rz_ * rz_)
    if n < 1e-7:
        return X_AXIS
    return UnitVector(rx / n, ry / n, rz_ / n)


def wrap_pm_pi(x: float) -> float:
    """Wrap into (-pi, pi]."""
    y = math.fmod(x, 2 * math.pi)
    if y <= -math.pi:
        y += 2 * math.pi
    elif y > math.pi:
        y -= 2 * math.pi
    return y


def split_rotation(axis: UnitVector, lam: float) -> tuple[UnitVector, UnitVector]:
    """Two-factor split: Pi(v2) Pi(v1) = R_axis(lam), v1 perpendicular to axis.

    v2 = R_axis(lam/2) v1 with lam/2 wrapped into (-pi, pi].
    """
    v1 = perp_axis(axis)
    v2 = rotate_axis(v1, axis, wrap_pm_pi(lam / 2))
    return v1, v2


def quarter_split(axis: UnitVector, lam: float) -> tuple[UnitVector, UnitVector]:
    """Four-factor split: Pi(v2) Pi(v1) Pi(v2) Pi(v1) = R_axis(lam)."""
    v1 = perp_axis(axis)
    v2 = rotate_axis(v1, axis, wrap_pm_pi(lam / 2) / 2)
    return v1, v2


def middle_axis(v: UnitVector, vp: UnitVector) -> UnitVector:
    """Unit vector midway between v and vp; Pi(mid) reflects v onto vp."""
    sx, sy, sz = v.x + vp.x, v.y + vp.y, v.z + vp.z
    n = math.sqrt(sx * sx + sy * sy + sz * sz)
    if n < 1e-7:
        raise ValueError("antipodal axes have no unique midpoint")
    return UnitVector(sx / n, sy / n, sz / n)


def zyz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    """ZYZ Euler angles: u = exp(i phase) Rz(alpha) Ry(beta) Rz(gamma)."""
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    phase = 0.5 * np.angle(det)
    su = u * np.exp(-1j * phase)
    beta = 2 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    if abs(su[0, 0]) > 1e-12:
        apg = 2 * np.angle(su[1, 1])  # alpha + gamma
    else:
        apg = 0.0
    if abs(su[1, 0]) > 1e-12:
        amg = 2 * np.angle(su[1, 0])  # alpha - gamma
    else:
        amg = 0.0
    alpha = (apg + amg) / 2
    gamma = (apg - amg) / 2
    return alpha, beta, gamma, phase


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


# ---------------------------------------------------------------------------
# Fixed identities, certified numerically on <= 3 qubits
# ---------------------------------------------------------------------------

def _controlled(u: np.ndarray, n_controls: int) -> np.ndarray:
    """Multi-controlled u with controls above the target (dense, small n)."""
    dim = 2 ** (n_controls + 1)
    out = np.eye(dim, dtype=complex)
    out[dim - 2 :, dim - 2 :] = u
    return out


def _kron(*mats: np.ndarray) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _maxdev(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def certify_fixed_identities(thetas=(0.3, math.pi / 4, 1.9)) -> dict[str, float]:
    """Numerically verify the fixed small-gate identities; return max deviations.

    Covers the two Hadamard factorizations through the S/V axes, the
    H-conjugation that maps z-plane MC rotations onto x-plane ones, the
    MCH/Rz sandwich with its stated diagonal residue, and the three-factor
    controlled-H variant with its stated residue.
    """
    H = pi_matrix(V_H)
    PS, PV = pi_matrix(V_S), pi_matrix(V_V)
    devs: dict[str, float] = {}

    devs["h_svs"] = _maxdev(H, PS @ (-PV) @ PS)
    devs["h_vsv"] = _maxdev(H, PV @ (-PS) @ PV)

    # H conjugation maps MC Pi_zbar to MC Pi_xbar, any control count.
    for nctrl in (0, 1, 2):
        for th in thetas:
            px = pi_matrix(UnitVector(0.0, -math.sin(th), math.cos(th)))
            pz = pi_matrix(UnitVector(math.cos(th), math.sin(th), 0.0))
            big_h = _kron(np.eye(2 ** nctrl, dtype=complex), H) if nctrl else H
            lhs = _controlled(px, nctrl)
            rhs = big_h @ _controlled(pz, nctrl) @ big_h
            key = f"mcpi_transform_n{nctrl}"
            devs[key] = max(devs.get(key, 0.0), _maxdev(lhs, rhs))

    # MCH . Rz(2t)^dag . MCH = Delta . MC Pi^t_xbar with
    # Delta = MCRz(2t) . Rz(2t)^dag . MCZ.
    for nctrl in (1, 2):
        for th in thetas:
            mch = _controlled(H, nctrl)
            rzt = _kron(np.eye(2 ** nctrl, dtype=complex), rz_matrix(2 * th).conj().T)
            lhs = mch @ rzt @ mch
            px = pi_matrix(UnitVector(0.0, -math.sin(th), math.cos(th)))
            delta = (
                _controlled(rz_matrix(2 * th), nctrl)
                @ rzt
                @ _controlled(_PAULI["z"], nctrl)
            )
            rhs = delta @ _controlled(px, nctrl)
            key = f"chh_delta_n{nctrl}"
            devs[key] = max(devs.get(key, 0.0), _maxdev(lhs, rhs))

    # CPi_V(c1) CPi_S(c2) CPi_V(c1) = Delta'' . CCH . CX(c2 -> t) with the
    # stated diagonal Delta''.  Qubit order (c1, c2, t), qubit 0 most
    # significant.
    def ctrl(c, t, u):  # controlled-u with control c, target t over 3 qubits
        dim = 8
        out = np.zeros((dim, dim), dtype=complex)
        for b in range(dim):
            bits = [(b >> (2 - i)) & 1 for i in range(3)]
            if bits[c] == 0:
                out[b, b] = 1.0
            else:
                for tb in (0, 1):
                    src = list(bits)
                    src[t] = tb
                    sb = sum(v << (2 - i) for i, v in enumerate(src))
                    out[b, sb] += u[bits[t], tb]
        return out

    cc_h = np.eye(8, dtype=complex)
    cc_h[6:, 6:] = H
    lhs = ctrl(0, 2, PV) @ ctrl(1, 2, PS) @ ctrl(0, 2, PV)
    ccrz = np.eye(8, dtype=complex)
    ccrz[6:, 6:] = rz_matrix(math.pi / 2).conj().T
    crz2 = ctrl(1, 2, rz_matrix(math.pi / 2))
    ccmz = np.eye(8, dtype=complex)
    ccmz[6:, 6:] = -_PAULI["z"]
    delta2 = ccrz @ crz2 @ ccmz
    rhs = delta2 @ cc_h @ ctrl(1, 2, _PAULI["x"])
    devs["dhx_vsv"] = _maxdev(lhs, rhs)
    # residual of the three-factor product against CCH.CX alone is diagonal
    resid = lhs @ (cc_h @ ctrl(1, 2, _PAULI["x"])).conj().T
    off = resid - np.diag(np.diag(resid))
    devs["dhx_vsv_offdiag"] = float(np.max(np.abs(off)))
    devs["dhx_vsv_unit_modulus"] = float(
        np.max(np.abs(np.abs(np.diag(resid)) - 1.0))
    )
    return devs
