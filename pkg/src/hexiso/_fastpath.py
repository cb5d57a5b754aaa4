"""Compiled right-hand-side kernel for the equations of motion.

Same math as model3d.assemble_system + a linear solve, specialized for the
integration hot loop. Falls back to the plain numpy path when numba is
unavailable. Status codes: 0 ok, 1 gimbal lock, 2 solve failed the residual
contract (caller re-solves through the diagnosing path).
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an optional accelerator
    njit = None

GIMBAL_LOCK_COS_THETA = 1e-6


def _rhs_kernel(R, d, u_b, RP, msSw, mass_template, inertia, k, c, y, f_in, tau_in):
    n = R.shape[0]
    out = np.zeros(12)

    theta = y[4]
    ct = np.cos(theta)
    if abs(ct) < GIMBAL_LOCK_COS_THETA:
        return out, 1

    psi, phi = y[3], y[5]
    cz, sz = np.cos(psi), np.sin(psi)
    st = np.sin(theta)
    cx, sx = np.cos(phi), np.sin(phi)
    Rh = np.empty((3, 3))
    Rh[0, 0] = cz * ct
    Rh[0, 1] = cz * st * sx - sz * cx
    Rh[0, 2] = cz * st * cx + sz * sx
    Rh[1, 0] = sz * ct
    Rh[1, 1] = sz * st * sx + cz * cx
    Rh[1, 2] = sz * st * cx - cz * sx
    Rh[2, 0] = -st
    Rh[2, 1] = ct * sx
    Rh[2, 2] = ct * cx

    w = y[9:12]
    M = mass_template.copy()
    M[3, 3] = -st
    M[3, 4] = 0.0
    M[3, 5] = 1.0
    M[4, 3] = ct * sx
    M[4, 4] = cx
    M[4, 5] = 0.0
    M[5, 3] = ct * cx
    M[5, 4] = -sx
    M[5, 5] = 0.0

    f_sum = np.zeros(3)
    tau_sum = np.zeros(3)
    D_bar = np.zeros((3, 3))
    U_bar = np.zeros((3, 3))
    Rh_ub = np.empty(3)
    p = np.empty(3)
    v = np.empty(3)
    cen = np.empty(3)
    u = np.empty(3)
    u_dot = np.empty(3)
    f_bar = np.empty(3)
    RhS = np.empty((3, 3))
    T = np.empty((3, 3))

    for i in range(n):
        ub = u_b[i]
        wxub0 = w[1] * ub[2] - w[2] * ub[1]
        wxub1 = w[2] * ub[0] - w[0] * ub[2]
        wxub2 = w[0] * ub[1] - w[1] * ub[0]
        wwxub0 = w[1] * wxub2 - w[2] * wxub1
        wwxub1 = w[2] * wxub0 - w[0] * wxub2
        wwxub2 = w[0] * wxub1 - w[1] * wxub0
        for a in range(3):
            Rh_ub[a] = Rh[a, 0] * ub[0] + Rh[a, 1] * ub[1] + Rh[a, 2] * ub[2]
            p[a] = y[a] + Rh_ub[a] - d[i, a]
            v[a] = y[6 + a] + Rh[a, 0] * wxub0 + Rh[a, 1] * wxub1 + Rh[a, 2] * wxub2
            cen[a] = Rh[a, 0] * wwxub0 + Rh[a, 1] * wwxub1 + Rh[a, 2] * wwxub2
        for a in range(3):
            u[a] = R[i, 0, a] * p[0] + R[i, 1, a] * p[1] + R[i, 2, a] * p[2]
            u_dot[a] = R[i, 0, a] * v[0] + R[i, 1, a] * v[1] + R[i, 2, a] * v[2]
        for a in range(3):
            f_bar[a] = (
                RP[i, a, 0] * (k * u[0] + c * u_dot[0])
                + RP[i, a, 1] * (k * u[1] + c * u_dot[1])
                + RP[i, a, 2] * (k * u[2] + c * u_dot[2])
                + msSw[i, a, 0] * cen[0]
                + msSw[i, a, 1] * cen[1]
                + msSw[i, a, 2] * cen[2]
            )
            f_sum[a] += f_bar[a]
        # tau_bar = ub x (Rh^T f_bar)
        fb0 = Rh[0, 0] * f_bar[0] + Rh[1, 0] * f_bar[1] + Rh[2, 0] * f_bar[2]
        fb1 = Rh[0, 1] * f_bar[0] + Rh[1, 1] * f_bar[1] + Rh[2, 1] * f_bar[2]
        fb2 = Rh[0, 2] * f_bar[0] + Rh[1, 2] * f_bar[1] + Rh[2, 2] * f_bar[2]
        tau_sum[0] += ub[1] * fb2 - ub[2] * fb1
        tau_sum[1] += ub[2] * fb0 - ub[0] * fb2
        tau_sum[2] += ub[0] * fb1 - ub[1] * fb0
        # D_bar += msSw_i @ Rh @ skew(ub); U_bar += skew(ub) Rh^T msSw_i Rh skew(ub)
        for a in range(3):
            # column j of Rh @ skew(ub):
            # skew(ub) columns: (0, ub2, -ub1), (-ub2, 0, ub0), (ub1, -ub0, 0)
            T[a, 0] = Rh[a, 1] * ub[2] - Rh[a, 2] * ub[1]
            T[a, 1] = -Rh[a, 0] * ub[2] + Rh[a, 2] * ub[0]
            T[a, 2] = Rh[a, 0] * ub[1] - Rh[a, 1] * ub[0]
        for a in range(3):
            for b in range(3):
                RhS[a, b] = (
                    msSw[i, a, 0] * T[0, b]
                    + msSw[i, a, 1] * T[1, b]
                    + msSw[i, a, 2] * T[2, b]
                )
                D_bar[a, b] += RhS[a, b]
        # skew(ub) @ Rh.T = -T.T, so U_bar = sum(-T.T @ (msSw @ T))
        for a in range(3):
            for b in range(3):
                U_bar[a, b] -= T[0, a] * RhS[0, b] + T[1, a] * RhS[1, b] + T[2, a] * RhS[2, b]

    for a in range(3):
        for b in range(3):
            M[6 + a, 9 + b] = -D_bar[a, b]
            M[9 + a, 6 + b] = -D_bar[b, a]
            M[9 + a, 9 + b] = inertia[a, b] - U_bar[a, b]

    g = np.empty(12)
    Iw0 = inertia[0, 0] * w[0] + inertia[0, 1] * w[1] + inertia[0, 2] * w[2]
    Iw1 = inertia[1, 0] * w[0] + inertia[1, 1] * w[1] + inertia[1, 2] * w[2]
    Iw2 = inertia[2, 0] * w[0] + inertia[2, 1] * w[1] + inertia[2, 2] * w[2]
    for a in range(3):
        g[a] = y[6 + a]
        g[3 + a] = w[a]
        g[6 + a] = (
            Rh[a, 0] * f_in[0] + Rh[a, 1] * f_in[1] + Rh[a, 2] * f_in[2] - f_sum[a]
        )
    g[9] = tau_in[0] - tau_sum[0] - (w[1] * Iw2 - w[2] * Iw1)
    g[10] = tau_in[1] - tau_sum[1] - (w[2] * Iw0 - w[0] * Iw2)
    g[11] = tau_in[2] - tau_sum[2] - (w[0] * Iw1 - w[1] * Iw0)

    y_dot = np.linalg.solve(M, g)
    # residual contract of the linear solve; failures fall back to the
    # diagnosing python path
    res = 0.0
    gn = 0.0
    for a in range(12):
        r = -g[a]
        for b in range(12):
            r += M[a, b] * y_dot[b]
        res += r * r
        gn += g[a] * g[a]
    if res > 1e-20 * gn:
        return out, 2
    return y_dot, 0


if njit is not None:
    _rhs_kernel = njit(cache=True, fastmath=False)(_rhs_kernel)

HAVE_COMPILED_KERNEL = njit is not None
