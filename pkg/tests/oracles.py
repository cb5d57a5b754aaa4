"""Independent reference implementations used to validate the library.

Everything here is written directly from the governing relations with plain
per-link loops, deliberately not sharing code with the package internals.
"""

import numpy as np


def skew_ref(w):
    return np.array([
        [0.0, -w[2], w[1]],
        [w[2], 0.0, -w[0]],
        [-w[1], w[0], 0.0],
    ])


def rot321_ref(psi, theta, phi):
    cz, sz = np.cos(psi), np.sin(psi)
    cy, sy = np.cos(theta), np.sin(theta)
    cx, sx = np.cos(phi), np.sin(phi)
    Rz = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1.0]])
    Ry = np.array([[cy, 0, sy], [0, 1.0, 0], [-sy, 0, cy]])
    Rx = np.array([[1.0, 0, 0], [0, cx, -sx], [0, sx, cx]])
    return Rz @ Ry @ Rx


def newton_euler_residuals(model, t, y, y_dot, excitation=None):
    """Momentum-balance residuals of the four state-equation blocks.

    Direct per-link summation of the joint forces: no block matrices, no
    rearrangement. Returns (residual_norm, scale) so callers can form a
    relative error.
    """
    y = np.asarray(y, dtype=float)
    y_dot = np.asarray(y_dot, dtype=float)
    d_hat, alpha, vel, omega = y[0:3], y[3:6], y[6:9], y[9:12]
    acc, omega_dot = y_dot[6:9], y_dot[9:12]
    strut = model.strut
    payload = model.payload
    Rh = rot321_ref(*alpha)
    psi, theta, phi = alpha
    B = np.array([
        [-np.sin(theta), 0.0, 1.0],
        [np.cos(theta) * np.sin(phi), np.cos(phi), 0.0],
        [np.cos(theta) * np.cos(phi), -np.sin(phi), 0.0],
    ])
    R0 = payload.rest_rotation

    f_tot = np.zeros(3)
    tau_tot = np.zeros(3)
    force_scale = 0.0
    for frame in model.frames:
        R, d = frame.rotation, frame.pin
        ub = R0.T @ d
        P = frame.projector
        two = frame.axis == "xy"
        msS = (2.0 if two else 1.0) * strut.m_s * np.eye(3) - strut.m_b * P

        u = R.T @ (d_hat + Rh @ ub - d)
        u_dot = R.T @ (vel + Rh @ skew_ref(omega) @ ub)
        u_ddot = R.T @ (
            acc + Rh @ skew_ref(omega_dot) @ ub
            + Rh @ skew_ref(omega) @ skew_ref(omega) @ ub
        )
        f_local = -strut.k * P @ u - strut.c * P @ u_dot - msS @ u_ddot
        f_world = R @ f_local
        f_tot += f_world
        tau_tot += skew_ref(ub) @ Rh.T @ f_world
        force_scale += np.abs(f_world).sum()

    f_in, tau_in = (np.zeros(3), np.zeros(3)) if excitation is None else excitation(t)
    inertia = payload.inertia_tensor

    r_pos = y_dot[0:3] - vel
    r_ang = B @ y_dot[3:6] - omega
    r_lin = payload.m_p * acc - (Rh @ np.asarray(f_in, dtype=float) + f_tot)
    r_rot = inertia @ omega_dot + skew_ref(omega) @ inertia @ omega - (
        np.asarray(tau_in, dtype=float) + tau_tot
    )

    residual = np.concatenate([r_pos, r_ang, r_lin, r_rot])
    scale = max(
        np.abs(vel).sum() + np.abs(omega).sum(),
        payload.m_p * np.abs(acc).sum() + force_scale + np.abs(f_in).sum(),
        np.abs(inertia @ omega_dot).sum() + np.abs(tau_in).sum() + 1e-30,
    )
    return float(np.linalg.norm(residual)), float(scale)


def ellipse_amplitude_bruteforce(v, samples=3600):
    """Max over phase of |Re(v e^{jt})| by sweeping a uniform phase grid.

    A second sweep of the same density around the coarse peak removes the
    grid discretization error (from ~1e-7 relative down to ~1e-13).
    """
    v = np.asarray(v, dtype=complex)

    def norms(ts):
        return np.linalg.norm(np.real(np.exp(1j * ts)[:, None] * v[None, :]), axis=1)

    t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    r = norms(t)
    t_peak = t[np.argmax(r)]
    h = 2.0 * np.pi / samples
    fine = np.linspace(t_peak - h, t_peak + h, samples)
    return float(max(r.max(), norms(fine).max()))


def projected_bipod_stiffness(k, alpha):
    """In-plane stiffness of two orthogonal struts at +-45 deg to ground,
    projected onto the direction at angle alpha."""
    n1 = np.array([np.cos(np.pi / 4), np.sin(np.pi / 4)])
    n2 = np.array([-np.sin(np.pi / 4), np.cos(np.pi / 4)])
    u = np.array([np.cos(alpha), np.sin(alpha)])
    return k * ((n1 @ u) ** 2 + (n2 @ u) ** 2)


def random_state(rng, position=1e-3, angle=1e-3, velocity=1e-2, rate=1e-2):
    """Random but physically plausible microvibration state."""
    return np.concatenate([
        rng.normal(scale=position, size=3),
        rng.normal(scale=angle, size=3),
        rng.normal(scale=velocity, size=3),
        rng.normal(scale=rate, size=3),
    ])
