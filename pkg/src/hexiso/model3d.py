"""Nonlinear rigid-body model of pin-slider parallel manipulators.

A manipulator is a payload rigid body suspended on n links. Each link i has a
constant frame (rotation R_i, pin position d_i at rest). The top of the link
is pinned to the payload; the bottom ends in a slider confined to the plane
orthogonal to the link axis, so links translate but never rotate. The spring/
damper acts along the constrained axes only (projector P_i); the two-part
link mass enters through the scaling matrix S_i.

The world frame origin sits at the nominal payload centre of mass. The
12-state vector is

    y = [d_hat, alpha, d_hat_dot, omega_b]

with alpha the 3-2-1 payload angles and omega_b the body-frame angular rate.
Models are immutable after construction and safe to share across workers.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _fastpath
from .bipod2d import StrutProperties
from .coremath import (
    GimbalLockError,
    euler_rate_matrix,
    is_rotation,
    rot313,
    rot321,
    skew,
    solve_linear,
)

POS = slice(0, 3)
ANG = slice(3, 6)
VEL = slice(6, 9)
OMEGA = slice(9, 12)

_AXIS_UNIT = {"x": np.array([1.0, 0.0, 0.0]), "y": np.array([0.0, 1.0, 0.0])}
_ZERO3 = np.zeros(3)


@dataclass(frozen=True)
class PayloadProperties:
    """Suspended rigid body: mass, principal inertias, rest orientation."""

    m_p: float
    principal_inertia: tuple  # (I_x, I_y, I_z) kg*m^2
    rest_rotation: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        if not self.m_p > 0:
            raise ValueError(f"payload mass must be positive, got {self.m_p}")
        object.__setattr__(self, "principal_inertia", tuple(float(v) for v in self.principal_inertia))
        if len(self.principal_inertia) != 3 or any(v <= 0 for v in self.principal_inertia):
            raise ValueError("principal_inertia must be three positive values")
        R0 = np.asarray(self.rest_rotation, dtype=float)
        if not is_rotation(R0, tol=1e-9):
            raise ValueError("rest_rotation is not a rotation matrix")
        object.__setattr__(self, "rest_rotation", R0)

    @property
    def inertia_tensor(self):
        return np.diag(self.principal_inertia)


@dataclass(frozen=True)
class GeometryParams:
    """Top-level hexapod geometry.

    beta is the planar angle between the two links of a pair, gamma the angle
    between a pair's plane and the top platform, phi_t the azimuthal pin
    separation of a pair on the top-platform circle (0 means coincident pins,
    pi/3 means six uniformly spaced pins). cm_below_platform is the vertical
    drop from the top-platform plane down to the payload CM.
    """

    r_t: float
    beta: float
    gamma: float
    phi_t: float = 0.0
    L: float = 0.3
    cm_below_platform: float = 0.0

    def __post_init__(self):
        if not self.r_t > 0:
            raise ValueError("top platform radius r_t must be positive")
        if not self.L > 0:
            raise ValueError("strut length L must be positive")
        if not 0 < self.beta < np.pi:
            raise ValueError("beta must lie in (0, pi)")
        if not 0 < self.gamma < np.pi:
            raise ValueError("gamma must lie in (0, pi)")


@dataclass(frozen=True)
class LinkFrame:
    """Constant frame of one link (or of one perpendicular link pair).

    axis is the local axis the link lies along: "x" or "y" for single links,
    "xy" for a perpendicular pair treated as one unit with both axes
    strut-aligned.
    """

    rotation: np.ndarray
    pin: np.ndarray
    axis: str = "x"

    def __post_init__(self):
        R = np.asarray(self.rotation, dtype=float)
        if not is_rotation(R, tol=1e-9):
            raise ValueError("link frame rotation is not in SO(3)")
        object.__setattr__(self, "rotation", R)
        object.__setattr__(self, "pin", np.asarray(self.pin, dtype=float))
        if self.axis not in ("x", "y", "xy"):
            raise ValueError(f"axis must be 'x', 'y' or 'xy', got {self.axis!r}")

    @property
    def axis_units(self):
        """Local unit vectors of the strut axes in this frame (one or two)."""
        if self.axis == "xy":
            return (_AXIS_UNIT["x"], _AXIS_UNIT["y"])
        return (_AXIS_UNIT[self.axis],)

    @property
    def projector(self):
        """Orthogonal projector P onto the constrained (strut-aligned) axes."""
        P = np.zeros((3, 3))
        for e in self.axis_units:
            P += np.outer(e, e)
        return P

    def mass_scaling_times_ms(self, strut):
        """m_s * S, assembled without dividing by m_s so the massless limit is exact.

        Pair form: m_s S = 2 m_s E - m_b P; single link: m_s S = m_s E - m_b P.
        """
        factor = 2.0 if self.axis == "xy" else 1.0
        return factor * strut.m_s * np.eye(3) - strut.m_b * self.projector


class ConfigurationError(ValueError):
    """Model construction request is geometrically or physically inconsistent."""


@dataclass(frozen=True)
class ManipulatorModel:
    """Immutable pin-slider manipulator: frames + strut + payload + caches.

    The cached stacks come in two granularities: per frame (dynamics) and per
    individual strut (reaction bookkeeping; an "xy" pair frame carries two).
    """

    frames: tuple
    strut: StrutProperties
    payload: PayloadProperties
    formulation: str = "link"
    ground_point: np.ndarray = field(default_factory=lambda: np.zeros(3))

    # per-frame caches
    R: np.ndarray = field(init=False, repr=False)
    d: np.ndarray = field(init=False, repr=False)
    u_b: np.ndarray = field(init=False, repr=False)
    skew_u_b: np.ndarray = field(init=False, repr=False)
    RP: np.ndarray = field(init=False, repr=False)
    msS_world: np.ndarray = field(init=False, repr=False)
    msS_sum: np.ndarray = field(init=False, repr=False)
    inertia: np.ndarray = field(init=False, repr=False)
    # per-strut caches
    strut_frame_index: np.ndarray = field(init=False, repr=False)
    strut_axis_local: np.ndarray = field(init=False, repr=False)
    strut_axis_world: np.ndarray = field(init=False, repr=False)
    strut_RP: np.ndarray = field(init=False, repr=False)
    mass_template: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        object.__setattr__(self, "ground_point", np.asarray(self.ground_point, dtype=float))
        if not self.frames:
            raise ConfigurationError("model needs at least one link frame")
        R0 = self.payload.rest_rotation
        R = np.stack([f.rotation for f in self.frames])
        d = np.stack([f.pin for f in self.frames])
        u_b = d @ R0  # u_i^b = R0^T d_i
        P = np.stack([f.projector for f in self.frames])
        msS = np.stack([f.mass_scaling_times_ms(self.strut) for f in self.frames])
        msS_world = R @ msS @ R.transpose(0, 2, 1)

        idx, ax_local = [], []
        for i, f in enumerate(self.frames):
            for e in f.axis_units:
                idx.append(i)
                ax_local.append(e)
        idx = np.array(idx)
        ax_local = np.stack(ax_local)
        ax_world = np.einsum("nij,nj->ni", R[idx], ax_local)

        template = np.zeros((12, 12))
        template[POS, POS] = np.eye(3)
        template[VEL, VEL] = self.payload.m_p * np.eye(3) + msS_world.sum(axis=0)

        for name, value in {
            "R": R, "d": d, "u_b": u_b,
            "skew_u_b": np.stack([skew(u) for u in u_b]),
            "RP": R @ P,
            "msS_world": msS_world,
            "msS_sum": msS_world.sum(axis=0),
            "inertia": self.payload.inertia_tensor,
            "strut_frame_index": idx,
            "strut_axis_local": ax_local,
            "strut_axis_world": ax_world,
            "strut_RP": R[idx] @ np.stack([np.outer(e, e) for e in ax_local]),
            "mass_template": template,
        }.items():
            object.__setattr__(self, name, value)

    @property
    def n_links(self):
        return len(self.frames)

    @property
    def n_struts(self):
        return len(self.strut_frame_index)

    @property
    def eta_s_times_ms(self):
        """eta_s * m_s = eta_t m_t + eta_b m_b (finite in the massless limit)."""
        s = self.strut
        return s.eta_t * s.m_t + s.eta_b * s.m_b

    def rest_slider_positions(self):
        return self.d[self.strut_frame_index] + self.strut.L * self.strut_axis_world


def build_hexapod(geometry, strut, payload, formulation="link"):
    """Construct a radially symmetric hexapod from its top-level geometry.

    Three link pairs sit at 120 deg spacing. Pair m has its pins centred at
    azimuth delta_m on the top-platform circle (split by phi_t) and its frame
    azimuth at psi_m = delta_m - pi/2, so the pair plane leans by gamma over
    the platform. Per-link frames are the 3-1-3 rotations
    (psi_m, gamma - pi, pi/2 -+ beta/2); the pair formulation shares one
    frame (psi_m, gamma - pi, (pi - beta)/2) with both local axes
    strut-aligned. The formulation switch changes bookkeeping only: for
    coincident pins and perpendicular pairs both produce identical dynamics.
    """
    if formulation not in ("link", "bipod"):
        raise ConfigurationError(f"unknown formulation {formulation!r}")
    if formulation == "bipod":
        if geometry.phi_t != 0.0:
            raise ConfigurationError(
                "bipod formulation requires coincident pin pairs (phi_t = 0), "
                f"got phi_t = {geometry.phi_t}"
            )
        if not np.isclose(geometry.beta, np.pi / 2, rtol=0, atol=1e-12):
            raise ConfigurationError(
                "bipod formulation assumes perpendicular link pairs (beta = pi/2), "
                f"got beta = {geometry.beta}; use the per-link formulation"
            )
    z_t = geometry.cm_below_platform
    theta = geometry.gamma - np.pi
    frames = []
    for m in range(3):
        delta = 2.0 * np.pi / 3.0 * m
        psi = delta - np.pi / 2.0
        if formulation == "bipod":
            frames.append(LinkFrame(
                rotation=rot313(psi, theta, (np.pi - geometry.beta) / 2.0),
                pin=np.array([geometry.r_t * np.cos(delta), geometry.r_t * np.sin(delta), z_t]),
                axis="xy",
            ))
        else:
            for sign in (-1.0, +1.0):
                pin_angle = delta + sign * geometry.phi_t / 2.0
                frames.append(LinkFrame(
                    rotation=rot313(psi, theta, np.pi / 2.0 + sign * geometry.beta / 2.0),
                    pin=np.array([
                        geometry.r_t * np.cos(pin_angle),
                        geometry.r_t * np.sin(pin_angle),
                        z_t,
                    ]),
                    axis="x",
                ))
    model = ManipulatorModel(frames=frames, strut=strut, payload=payload,
                             formulation=formulation)
    # ground reference defaults to the bottom-platform centre
    g = model.rest_slider_positions().mean(axis=0)
    g[np.abs(g) < 1e-15] = 0.0
    return ManipulatorModel(frames=frames, strut=strut, payload=payload,
                            formulation=formulation, ground_point=g)


# -- degenerate special cases -------------------------------------------------

def pin_slider_bipod_model(strut, payload):
    """Single perpendicular link pair pinned at the origin (pair formulation)."""
    return ManipulatorModel(
        frames=(LinkFrame(rotation=np.eye(3), pin=np.zeros(3), axis="xy"),),
        strut=strut, payload=payload, formulation="bipod",
    )


def two_link_bipod_model(strut, payload):
    """The same pair as two individual links along x and y at the origin."""
    return ManipulatorModel(
        frames=(
            LinkFrame(rotation=np.eye(3), pin=np.zeros(3), axis="x"),
            LinkFrame(rotation=np.eye(3), pin=np.zeros(3), axis="y"),
        ),
        strut=strut, payload=payload, formulation="link",
    )


def single_strut_model(strut, payload):
    """Payload attached to one x-aligned link at the origin."""
    return ManipulatorModel(
        frames=(LinkFrame(rotation=np.eye(3), pin=np.zeros(3), axis="x"),),
        strut=strut, payload=payload, formulation="link",
    )


# -- kinematics and assembly --------------------------------------------------

def state_vector(d_hat=(0, 0, 0), angles=(0, 0, 0), d_hat_dot=(0, 0, 0), omega_b=(0, 0, 0)):
    """Pack the four 3-vectors into the 12-state layout."""
    return np.concatenate([
        np.asarray(d_hat, dtype=float),
        np.asarray(angles, dtype=float),
        np.asarray(d_hat_dot, dtype=float),
        np.asarray(omega_b, dtype=float),
    ])


def _cross_rows(w, A):
    """cross(w, A[i]) for a 3-vector w against the rows of an (n, 3) array."""
    out = np.empty_like(A)
    out[:, 0] = w[1] * A[:, 2] - w[2] * A[:, 1]
    out[:, 1] = w[2] * A[:, 0] - w[0] * A[:, 2]
    out[:, 2] = w[0] * A[:, 1] - w[1] * A[:, 0]
    return out


def _cross3(a, b):
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def _kinematics_with_rotation(model, y, Rh):
    p = y[POS] + model.u_b @ Rh.T - model.d
    v = y[VEL] + _cross_rows(y[OMEGA], model.u_b) @ Rh.T
    u = np.einsum("nba,nb->na", model.R, p)
    u_dot = np.einsum("nba,nb->na", model.R, v)
    return u, u_dot


def joint_kinematics(model, y):
    """Pin displacement and velocity of every link frame, in its own axes.

    Returns (u, u_dot), each (n_links, 3).
    """
    y = np.asarray(y, dtype=float)
    return _kinematics_with_rotation(model, y, rot321(*y[ANG]))


def joint_accelerations(model, y, d_hat_ddot, omega_b_dot):
    """Pin accelerations in link frames given the solved payload accelerations."""
    y = np.asarray(y, dtype=float)
    Rh = rot321(*y[ANG])
    w = y[OMEGA]
    a = (
        np.asarray(d_hat_ddot, dtype=float)
        + np.cross(omega_b_dot, model.u_b) @ Rh.T
        + np.cross(w, np.cross(w, model.u_b)) @ Rh.T
    )
    return np.einsum("nba,nb->na", model.R, a)


def assemble_system(model, t, y, excitation=None):
    """Assemble the first-order system M(t, y) @ y_dot = g(t, y).

    excitation is a callable t -> (f_in_b, tau_in_b) in the body frame, or
    None for free motion.
    """
    y = np.asarray(y, dtype=float)
    Rh = rot321(*y[ANG])
    B = euler_rate_matrix(y[4], y[5])
    w = y[OMEGA]

    u, u_dot = _kinematics_with_rotation(model, y, Rh)
    # per-frame generalised forces: spring/damper along constrained axes plus
    # the centripetal part of the link inertia
    f_bar = np.einsum("nab,nb->na", model.RP, model.strut.k * u + model.strut.c * u_dot)
    f_bar += np.einsum(
        "nab,nb->na", model.msS_world, _cross_rows(w, _cross_rows(w, model.u_b)) @ Rh.T
    )
    fb = f_bar @ Rh
    tau_bar = np.empty_like(fb)
    ub = model.u_b
    tau_bar[:, 0] = ub[:, 1] * fb[:, 2] - ub[:, 2] * fb[:, 1]
    tau_bar[:, 1] = ub[:, 2] * fb[:, 0] - ub[:, 0] * fb[:, 2]
    tau_bar[:, 2] = ub[:, 0] * fb[:, 1] - ub[:, 1] * fb[:, 0]

    Rh_skew_ub = Rh[None, :, :] @ model.skew_u_b
    D_bar = (model.msS_world @ Rh_skew_ub).sum(axis=0)
    U_bar = (model.skew_u_b @ Rh.T[None, :, :] @ model.msS_world @ Rh_skew_ub).sum(axis=0)

    M = model.mass_template.copy()
    M[ANG, ANG] = B
    M[VEL, OMEGA] = -D_bar
    M[OMEGA, VEL] = -D_bar.T
    M[OMEGA, OMEGA] = model.inertia - U_bar
    if __debug__:
        block = M[6:, 6:]
        assert np.abs(block - block.T).max() <= 1e-10 * (1.0 + np.abs(block).max())

    f_in, tau_in = (np.zeros(3), np.zeros(3)) if excitation is None else excitation(t)
    g = np.empty(12)
    g[POS] = y[VEL]
    g[ANG] = w
    g[VEL] = Rh @ np.asarray(f_in, dtype=float) - f_bar.sum(axis=0)
    g[OMEGA] = np.asarray(tau_in, dtype=float) - tau_bar.sum(axis=0) - _cross3(w, model.inertia @ w)
    return M, g


def _state_derivative_plain(model, t, y, excitation=None):
    M, g = assemble_system(model, t, y, excitation)
    return solve_linear(M, g, context=f"{model.formulation} model with {model.n_links} frames")


def state_derivative(model, t, y, excitation=None):
    """Right-hand side y_dot of the equations of motion."""
    if not _fastpath.HAVE_COMPILED_KERNEL:
        return _state_derivative_plain(model, t, y, excitation)
    f_in, tau_in = (_ZERO3, _ZERO3) if excitation is None else excitation(t)
    try:
        y_dot, status = _fastpath._rhs_kernel(
            model.R, model.d, model.u_b, model.RP, model.msS_world,
            model.mass_template, model.inertia, model.strut.k, model.strut.c,
            np.asarray(y, dtype=float), np.asarray(f_in, dtype=float),
            np.asarray(tau_in, dtype=float),
        )
    except np.linalg.LinAlgError:
        status = 2
    if status == 0:
        return y_dot
    if status == 1:
        raise GimbalLockError(
            f"pitch angle {y[4]!r} rad is too close to gimbal lock; "
            "the 3-2-1 angle-rate basis is ill-conditioned"
        )
    return _state_derivative_plain(model, t, y, excitation)  # diagnose properly


# -- transmitted forces and moments -------------------------------------------

@dataclass(frozen=True)
class ReactionOutputs:
    """Base reactions for one state.

    f_out_per_link follows the frame granularity (a pair frame reports its
    two struts summed); slider_positions and roller_moments are per strut.
    Roller moments are expressed in the local link frames.
    """

    f_out: np.ndarray
    f_out_per_link: np.ndarray
    mu_ground: np.ndarray
    slider_positions: np.ndarray
    roller_moments: np.ndarray


def reaction_forces(model, u, u_dot):
    """World-frame force transmitted to the base by each frame and in total."""
    per_link = np.einsum(
        "nab,nb->na", model.RP, model.strut.k * u + model.strut.c * u_dot
    )
    return per_link.sum(axis=0), per_link


def slider_positions(model, u):
    """World slider positions, one per strut.

    The transverse part of the pin displacement carries rigidly down the
    link; the slider sits L along the link axis from the pin.
    """
    idx = model.strut_frame_index
    u_f = u[idx]
    u_world = np.einsum("nab,nb->na", model.R[idx], u_f)
    constrained = np.einsum("nab,nb->na", model.strut_RP, u_f)
    return (u_world - constrained) + model.strut.L * model.strut_axis_world + model.d[idx]


def ground_moment(model, G, u, u_dot):
    """Moment about world point G of the per-strut transmitted forces.

    Returns (mu_rG, slider_positions).
    """
    idx = model.strut_frame_index
    f_per_strut = np.einsum(
        "nab,nb->na", model.strut_RP,
        model.strut.k * u[idx] + model.strut.c * u_dot[idx],
    )
    s = slider_positions(model, u)
    lever = np.asarray(G, dtype=float) - s
    return -np.cross(lever, f_per_strut).sum(axis=0), s


def slider_reaction_moments(model, u_ddot):
    """Local-frame reaction moment of each planar joint, one per strut.

    mu = eta_s L m_s cross(e_axis, u_ddot); vanishes for massless links and
    has no component along the link axis.
    """
    factor = model.eta_s_times_ms * model.strut.L
    return factor * np.cross(model.strut_axis_local, u_ddot[model.strut_frame_index])


def evaluate_reactions(model, t, y, excitation=None, G=None):
    """All base reactions at one state, solving for accelerations as needed."""
    if G is None:
        G = model.ground_point
    y_dot = state_derivative(model, t, y, excitation)
    u, u_dot = joint_kinematics(model, y)
    f_out, per_link = reaction_forces(model, u, u_dot)
    mu, s = ground_moment(model, G, u, u_dot)
    u_ddot = joint_accelerations(model, y, y_dot[VEL], y_dot[OMEGA])
    return ReactionOutputs(
        f_out=f_out,
        f_out_per_link=per_link,
        mu_ground=mu,
        slider_positions=s,
        roller_moments=slider_reaction_moments(model, u_ddot),
    )


def reaction_series_batch(model, states, G=None):
    """Transmitted force and ground moment for a whole batch of states.

    states is (n_samples, 12); returns (n_samples, 6) with columns
    [F_out_xyz, M_rG_xyz]. Velocity-level outputs only, so no acceleration
    solve is needed; vectorized across samples.
    """
    if G is None:
        G = model.ground_point
    Y = np.asarray(states, dtype=float)
    psi, theta, phi = Y[:, 3], Y[:, 4], Y[:, 5]
    cz, sz = np.cos(psi), np.sin(psi)
    cy, sy = np.cos(theta), np.sin(theta)
    cx, sx = np.cos(phi), np.sin(phi)
    Rh = np.empty((len(Y), 3, 3))
    Rh[:, 0, 0] = cz * cy
    Rh[:, 0, 1] = cz * sy * sx - sz * cx
    Rh[:, 0, 2] = cz * sy * cx + sz * sx
    Rh[:, 1, 0] = sz * cy
    Rh[:, 1, 1] = sz * sy * sx + cz * cx
    Rh[:, 1, 2] = sz * sy * cx - cz * sx
    Rh[:, 2, 0] = -sy
    Rh[:, 2, 1] = cy * sx
    Rh[:, 2, 2] = cy * cx

    w = Y[:, 9:12]
    p = Y[:, None, 0:3] + np.einsum("nab,ib->nia", Rh, model.u_b) - model.d
    v = Y[:, None, 6:9] + np.einsum(
        "nab,nib->nia", Rh, np.cross(w[:, None, :], model.u_b[None, :, :])
    )
    u = np.einsum("iba,nib->nia", model.R, p)
    u_dot = np.einsum("iba,nib->nia", model.R, v)

    kcu = model.strut.k * u + model.strut.c * u_dot
    idx = model.strut_frame_index
    f_strut = np.einsum("iab,nib->nia", model.strut_RP, kcu[:, idx, :])
    u_world = np.einsum("iab,nib->nia", model.R[idx], u[:, idx, :])
    s = (
        u_world
        - np.einsum("iab,nib->nia", model.strut_RP, u[:, idx, :])
        + model.strut.L * model.strut_axis_world
        + model.d[idx]
    )
    out = np.empty((len(Y), 6))
    out[:, 0:3] = np.einsum("iab,nib->na", model.RP, kcu)
    out[:, 3:6] = -np.cross(np.asarray(G, dtype=float) - s, f_strut).sum(axis=1)
    return out


def total_energy(model, y):
    """Payload + link kinetic energy plus elastic energy of the springs.

    Conserved exactly by the undamped unforced dynamics; used as an
    integration-quality diagnostic.
    """
    y = np.asarray(y, dtype=float)
    u, u_dot = joint_kinematics(model, y)
    kinetic = 0.5 * model.payload.m_p * y[VEL] @ y[VEL]
    kinetic += 0.5 * y[OMEGA] @ model.inertia @ y[OMEGA]
    msS = np.stack([f.mass_scaling_times_ms(model.strut) for f in model.frames])
    kinetic += 0.5 * np.einsum("ni,nij,nj->", u_dot, msS, u_dot)
    P = np.stack([f.projector for f in model.frames])
    elastic = 0.5 * model.strut.k * np.einsum("ni,nij,nj->", u, P, u)
    return kinetic + elastic
