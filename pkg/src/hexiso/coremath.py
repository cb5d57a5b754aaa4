"""Small fixed-dimension algebra: skew operator, rotation constructors, 12x12 solves.

Everything here operates on plain float64 numpy arrays of fixed shape
((3,), (3, 3), (12,), (12, 12)) and is pure/thread-safe.
"""

import numpy as np
from scipy.linalg import lapack

GIMBAL_LOCK_COS_THETA = 1e-6
SINGULAR_RCOND = 1e-12  # condition estimate above 1e12 is treated as singular


class GimbalLockError(RuntimeError):
    """Pitch angle too close to +-pi/2 for the 3-2-1 angle rates to be defined."""


class SingularSystemError(RuntimeError):
    """Assembled system matrix is numerically singular."""


def skew(w):
    """Skew-symmetric matrix of w, so that skew(w) @ z == cross(w, z)."""
    return np.array([
        [0.0, -w[2], w[1]],
        [w[2], 0.0, -w[0]],
        [-w[1], w[0], 0.0],
    ])


def _rz(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rx(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot321(psi, theta, phi):
    """3-2-1 Tait-Bryan rotation Rz(psi) @ Ry(theta) @ Rx(phi)."""
    cz, sz = np.cos(psi), np.sin(psi)
    cy, sy = np.cos(theta), np.sin(theta)
    cx, sx = np.cos(phi), np.sin(phi)
    return np.array([
        [cz * cy, cz * sy * sx - sz * cx, cz * sy * cx + sz * sx],
        [sz * cy, sz * sy * sx + cz * cx, sz * sy * cx - cz * sx],
        [-sy, cy * sx, cy * cx],
    ])


def rot313(psi, theta, phi):
    """3-1-3 Euler rotation Rz(psi) @ Rx(theta) @ Rz(phi)."""
    return _rz(psi) @ _rx(theta) @ _rz(phi)


def euler_rate_matrix(theta, phi):
    """Matrix B mapping 3-2-1 angle rates to body angular velocity, w = B @ adot.

    det(B) = -cos(theta); raises GimbalLockError near |cos(theta)| = 0 so the
    caller aborts with a diagnostic instead of integrating garbage.
    """
    ct, st = np.cos(theta), np.sin(theta)
    if abs(ct) < GIMBAL_LOCK_COS_THETA:
        raise GimbalLockError(
            f"pitch angle {theta!r} rad is within {GIMBAL_LOCK_COS_THETA} of gimbal "
            "lock; the 3-2-1 angle-rate basis is ill-conditioned"
        )
    cp, sp = np.cos(phi), np.sin(phi)
    return np.array([
        [-st, 0.0, 1.0],
        [ct * sp, cp, 0.0],
        [ct * cp, -sp, 0.0],
    ])


def solve_linear(M, g, context="system"):
    """Solve M @ x = g by LU with partial pivoting (12x12 or any square).

    Raises SingularSystemError when the 1-norm condition estimate exceeds
    1/SINGULAR_RCOND, naming `context` so configuration errors are traceable.
    """
    M = np.asarray(M, dtype=float)
    g = np.asarray(g, dtype=float)
    anorm = np.linalg.norm(M, 1)
    lu, piv, info = lapack.dgetrf(M)
    if info == 0:
        rcond, _ = lapack.dgecon(lu, anorm, norm="1")
    else:
        rcond = 0.0
    if rcond < SINGULAR_RCOND:
        raise SingularSystemError(
            f"singular matrix while solving {context}: "
            f"condition estimate {0.0 if rcond == 0 else 1.0 / rcond:.3e}"
        )
    x, info = lapack.dgetrs(lu, piv, g)
    if info != 0:
        raise SingularSystemError(f"LU back-substitution failed for {context}")
    return x


def is_rotation(R, tol=1e-12):
    """Check R.T @ R == identity and det(R) == 1 within tol."""
    R = np.asarray(R)
    return (
        R.shape == (3, 3)
        and np.linalg.norm(R.T @ R - np.eye(3)) <= tol
        and abs(np.linalg.det(R) - 1.0) <= tol
    )
