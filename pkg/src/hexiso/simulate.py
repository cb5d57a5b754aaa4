"""Time integration, ramped-sine excitation, linearization and modal analysis."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import model3d

CHANNELS = ("Fx", "Fy", "Fz", "Tx", "Ty", "Tz")


class IntegrationError(RuntimeError):
    """Integrator could not meet the error contract."""


@dataclass(frozen=True)
class ExcitationSpec:
    """Smoothly ramped sinusoid on one body-frame force/torque channel.

    The envelope sin^2(pi t / (2 t_r)) rises C1-continuously from 0 to 1 over
    the ramp time t_r, then stays at 1.
    """

    channel: str
    frequency_hz: float
    amplitude: float = 1.0
    ramp_time: float = 1.0
    duration: float = 10.0

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if not self.frequency_hz > 0:
            raise ValueError("frequency must be positive")
        if not self.ramp_time > 0:
            raise ValueError("ramp time must be positive")
        if not self.duration > self.ramp_time:
            raise ValueError("duration must exceed the ramp time")

    def signal(self, t):
        return self.amplitude * excitation_signal(self.frequency_hz, self.ramp_time, t)

    def force_torque(self, t):
        """Body-frame (force, torque) 3-vectors at time t."""
        f = np.zeros(3)
        tau = np.zeros(3)
        i = CHANNELS.index(self.channel)
        val = self.signal(t)
        if i < 3:
            f[i] = val
        else:
            tau[i - 3] = val
        return f, tau


def excitation_signal(f_hz, t_r, t):
    """Unit-amplitude ramped sinusoid; envelope derivative is 0 at t=0 and t=t_r."""
    w = 2.0 * math.pi * f_hz
    if t < 0.0:
        return 0.0
    if t <= t_r:
        env = math.sin(math.pi * t / (2.0 * t_r)) ** 2
        return env * math.sin(w * t)
    return math.sin(w * t)


def default_ramp_time(model, f_hz, zeta_min=None):
    """Ramp long enough for transients to die within the run.

    max(40/f, 5/(2 pi f zeta_min)), with zeta_min the smallest modal damping
    ratio from linearization. Undamped models fall back to 40 cycles.
    """
    if zeta_min is None:
        zeta_min = min((m.damping_ratio for m in modal_analysis(model)), default=0.0)
    t_r = 40.0 / f_hz
    if zeta_min > 1e-9:
        t_r = max(t_r, 5.0 / (2.0 * math.pi * f_hz * zeta_min))
    return t_r


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled solution of one integration run."""

    t: np.ndarray
    y: np.ndarray  # (n_samples, 12)
    model: object = field(repr=False)
    excitation: object = field(default=None, repr=False)

    def reaction_series(self, G=None):
        """Total transmitted force and ground moment at every sample, (n, 6)."""
        return model3d.reaction_series_batch(self.model, self.y, G=G)


def integrate(model, excitation=None, duration=None, rel_tol=1e-9, abs_tol=1e-14,
              max_step=None, samples_per_period=40, y0=None, method="DOP853"):
    """Error-controlled integration of the equations of motion.

    The step size is capped at one tenth of the excitation period and the
    solution is reported on a uniform grid of at least `samples_per_period`
    samples per period (default 40). Gimbal lock and step-size underflow
    abort with a diagnostic.
    """
    if duration is None:
        if excitation is None:
            raise ValueError("duration is required when there is no excitation")
        duration = excitation.duration
    if max_step is None:
        max_step = 1.0 / (10.0 * excitation.frequency_hz) if excitation is not None else np.inf
    if y0 is None:
        y0 = np.zeros(12)

    exc = None if excitation is None else excitation.force_torque

    def rhs(t, y):
        return model3d.state_derivative(model, t, y, exc)

    if excitation is not None:
        # keep the grid commensurate with the drive: whole cycles, exactly
        # samples_per_period points per period, so harmonics of the response
        # stay discretely orthogonal to the quadrature fit
        cycles = math.ceil(duration * excitation.frequency_hz - 1e-9)
        duration = cycles / excitation.frequency_hz
        n_samples = samples_per_period * cycles + 1
    else:
        n_samples = max(int(math.ceil(100 * duration)), 100) + 1
    t_eval = np.linspace(0.0, duration, n_samples)

    # GimbalLockError raised by the RHS propagates out of solve_ivp untouched
    sol = solve_ivp(rhs, (0.0, duration), np.asarray(y0, dtype=float),
                    method=method, rtol=rel_tol, atol=abs_tol,
                    max_step=max_step, t_eval=t_eval)
    if not sol.success:
        raise IntegrationError(
            "step size underflow (stiff or unstable system): " + sol.message
            if "step size" in sol.message.lower()
            else f"integration failed: {sol.message}"
        )
    return Trajectory(t=sol.t, y=sol.y.T, model=model, excitation=excitation)


def linearize_at_rest(model):
    """State matrix A = d(y_dot)/dy at the rest equilibrium, zero input.

    Central finite differences with per-component step 1e-7 (state magnitude
    floor 1 at rest).
    """
    A = np.empty((12, 12))
    h = 1e-7
    for j in range(12):
        e = np.zeros(12)
        e[j] = h
        A[:, j] = (
            model3d.state_derivative(model, 0.0, e)
            - model3d.state_derivative(model, 0.0, -e)
        ) / (2.0 * h)
    return A


@dataclass(frozen=True)
class Mode:
    """One oscillatory mode pair of the linearized model."""

    frequency_hz: float      # undamped natural frequency |lambda| / 2 pi
    damping_ratio: float
    label: str               # "in-plane" | "translation-z" | "rotation-z"
    eigenvalue: complex
    eigenvector: np.ndarray = field(repr=False)


# state components used for the axis-dominance classification
_Z_TRANSLATION = (2, 8)
_Z_ROTATION = (3, 11)  # yaw angle and body z rate
_DOMINANCE = 0.8


def _classify(vec):
    total = float(np.sum(np.abs(vec) ** 2))
    frac_t = float(np.sum(np.abs(vec[list(_Z_TRANSLATION)]) ** 2)) / total
    frac_r = float(np.sum(np.abs(vec[list(_Z_ROTATION)]) ** 2)) / total
    if frac_t >= _DOMINANCE:
        return "translation-z"
    if frac_r >= _DOMINANCE:
        return "rotation-z"
    return "in-plane"


def modal_analysis(model):
    """Oscillatory modes of the rest-state linearization, sorted by frequency.

    Repeated frequencies are reported with their multiplicity rather than
    collapsed. Labels mark modes whose eigenvector mass sits >= 80% on the
    vertical translation or vertical rotation states; the rest are the
    inherently coupled in-plane modes.
    """
    A = linearize_at_rest(model)
    w, v = np.linalg.eig(A)
    modes = []
    for lam, vec in zip(w, v.T):
        if lam.imag <= 0.0:
            continue  # keep one of each conjugate pair
        mag = abs(lam)
        modes.append(Mode(
            frequency_hz=mag / (2.0 * math.pi),
            damping_ratio=-lam.real / mag if mag > 0 else 0.0,
            label=_classify(vec),
            eigenvalue=complex(lam),
            eigenvector=vec,
        ))
    modes.sort(key=lambda m: m.frequency_hz)
    return modes


def natural_frequencies(model):
    """Modal frequencies in Hz with axis labels, lowest first."""
    return [(m.frequency_hz, m.label) for m in modal_analysis(model)]
