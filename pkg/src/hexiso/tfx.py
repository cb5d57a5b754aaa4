"""Steady-state amplitude extraction and transfer-function matrix assembly.

A transfer-function point is measured by driving one body-frame input channel
with a unit ramped sinusoid, integrating to dynamic steady state and fitting
the output's quadrature components at the drive frequency. The 6x6 matrix
maps [F_in_x, F_in_y, F_in_z, T_in_x, T_in_y, T_in_z] (body frame) to
[F_out_x, F_out_y, F_out_z, M_rG_x, M_rG_y, M_rG_z] (world frame), so mixed
cells carry units of N*m/N or N/(N*m).
"""

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .simulate import CHANNELS, ExcitationSpec, default_ramp_time, integrate, modal_analysis

OUT_CHANNELS = ("Fx", "Fy", "Fz", "Mx", "My", "Mz")

NOISE_FLOOR_DB = -180.0  # integration noise level for unit inputs at rtol 1e-9

# structurally zero cells of the radially symmetric pin-slider TF matrix
# (0-based (output, input)); the vertical force row and vertical moment row
# couple only to vertical force / vertical torque inputs
STRUCTURAL_ZEROS = (
    (2, 0), (2, 1), (2, 3), (2, 4), (2, 5),
    (5, 0), (5, 1), (5, 3), (5, 4),
)

# pairs equal by radial symmetry, 0-based (output, input)
SYMMETRY_PAIRS = (
    (((0, 0)), ((1, 1))),
    (((3, 3)), ((4, 4))),
    (((1, 3)), ((0, 4))),
    (((3, 1)), ((4, 0))),
    (((3, 2)), ((4, 2))),
)


class NonSteadyStateWarning(UserWarning):
    """Quadrature fit residual exceeds 5% of the amplitude."""


def steady_state_amplitude(t, signal, f_hz, periods=5, fit_fraction=None):
    """Amplitude of the f_hz component over the last `periods` drive periods.

    Least-squares fit of A sin(wt) + B cos(wt) + C; returns sqrt(A^2 + B^2).
    Emits NonSteadyStateWarning when the fit residual exceeds 5% of the
    amplitude (ramp or duration too short for a periodic steady state).
    """
    t = np.asarray(t, dtype=float)
    signal = np.asarray(signal, dtype=float)
    window = periods / f_hz if fit_fraction is None else fit_fraction * (t[-1] - t[0])
    mask = t >= t[-1] - window
    tw, yw = t[mask], signal[mask]
    if len(tw) < 8:
        raise ValueError("not enough samples in the fit window")
    # on a grid commensurate with 1/f_hz the window spans whole periods with
    # one duplicated phase sample; dropping it keeps response harmonics
    # (constant, 2f, 3f, ...) exactly orthogonal to the fit basis
    dt = tw[1] - tw[0]
    n_period = round(1.0 / (f_hz * dt)) if dt > 0 else 0
    if n_period > 0 and len(tw) % n_period == 1:
        tw, yw = tw[1:], yw[1:]
    w = 2.0 * math.pi * f_hz
    design = np.column_stack([np.sin(w * tw), np.cos(w * tw), np.ones_like(tw)])
    coef, *_ = np.linalg.lstsq(design, yw, rcond=None)
    amplitude = float(np.hypot(coef[0], coef[1]))
    residual = float(np.sqrt(np.mean((design @ coef - yw) ** 2)))
    if amplitude > 0 and residual > 0.05 * amplitude:
        warnings.warn(
            f"fit residual {residual:.3g} exceeds 5% of amplitude {amplitude:.3g}; "
            "steady state not reached (increase ramp time or duration)",
            NonSteadyStateWarning,
            stacklevel=2,
        )
    return amplitude


@dataclass(frozen=True)
class TFPoint:
    """One transfer-function sample."""

    frequency_hz: float
    in_channel: str
    out_channel: str
    amplitude: float  # steady-state output amplitude for unit input
    ratio: float      # output amplitude / input amplitude

    @property
    def db(self):
        return 20.0 * math.log10(self.ratio) if self.ratio > 0 else -math.inf


def _run_channel(model, in_channel, f_hz, amplitude=1.0, ramp_time=None,
                 cycles_after_ramp=15, rel_tol=1e-9, abs_tol=1e-14, zeta_min=None):
    """Drive one input channel; return the 6 output amplitudes (unit-input ratios)."""
    if ramp_time is None:
        ramp_time = default_ramp_time(model, f_hz, zeta_min=zeta_min)
    spec = ExcitationSpec(
        channel=in_channel, frequency_hz=f_hz, amplitude=amplitude,
        ramp_time=ramp_time, duration=ramp_time + cycles_after_ramp / f_hz,
    )
    traj = integrate(model, spec, rel_tol=rel_tol, abs_tol=abs_tol)
    series = traj.reaction_series()
    floor = amplitude * 10.0 ** (NOISE_FLOOR_DB / 20.0)
    ratios = np.empty(6)
    for q in range(6):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NonSteadyStateWarning)
            amp = steady_state_amplitude(traj.t, series[:, q], f_hz)
        ratios[q] = amp / amplitude
        # a ragged fit on a noise-floor output is expected, not a diagnostic
        if amp > 10.0 * floor:
            for w in caught:
                warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    return ratios


def tf_point(model, in_channel, out_channel, f_hz, amplitude=1.0, ramp_time=None,
             cycles_after_ramp=15, rel_tol=1e-9, abs_tol=1e-14):
    """Single transfer-function point from a transient run on one channel."""
    if in_channel not in CHANNELS:
        raise ValueError(f"unknown input channel {in_channel!r}")
    if out_channel not in OUT_CHANNELS:
        raise ValueError(f"unknown output channel {out_channel!r}")
    ratios = _run_channel(model, in_channel, f_hz, amplitude=amplitude,
                          ramp_time=ramp_time, cycles_after_ramp=cycles_after_ramp,
                          rel_tol=rel_tol, abs_tol=abs_tol)
    q = OUT_CHANNELS.index(out_channel)
    return TFPoint(
        frequency_hz=f_hz,
        in_channel=in_channel,
        out_channel=out_channel,
        amplitude=ratios[q] * amplitude,
        ratio=float(ratios[q]),
    )


@dataclass(frozen=True)
class TFMatrix:
    """Magnitude of the 6x6 transfer-function matrix over a frequency grid."""

    frequencies: np.ndarray
    magnitude: np.ndarray = field(repr=False)  # (n_freq, 6, 6) linear ratios

    def db(self, floor=1e-300):
        return 20.0 * np.log10(np.maximum(self.magnitude, floor))

    def cell(self, out_index, in_index):
        """Magnitude series of one cell (0-based indices)."""
        return self.magnitude[:, out_index, in_index]


def default_grid(f_lo=0.1, f_hi=1000.0, points_per_decade=30):
    """Log-spaced frequency grid, `points_per_decade` per decade."""
    n = int(round(points_per_decade * math.log10(f_hi / f_lo))) + 1
    return np.logspace(math.log10(f_lo), math.log10(f_hi), n)


def _matrix_job(args):
    model, channel, f_hz, kwargs = args
    return _run_channel(model, channel, f_hz, **kwargs)


def tf_matrix(model, grid, jobs=None, **kwargs):
    """All 36 input-output magnitude series over the grid.

    Six integration runs per frequency (one per input channel), each read on
    all six outputs. Runs fan out over a process pool; aggregation is
    order-independent.
    """
    grid = np.asarray(grid, dtype=float)
    if len(grid) == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("frequency grid must be positive and strictly increasing")
    # pin the ramp heuristic once so workers skip the repeated linearization
    kwargs.setdefault("zeta_min", min(m.damping_ratio for m in modal_analysis(model)))
    tasks = [(model, ch, f, kwargs) for f in grid for ch in CHANNELS]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_matrix_job, tasks, chunksize=4))
    else:
        results = [_matrix_job(t) for t in tasks]
    mag = np.empty((len(grid), 6, 6))
    for idx, ratios in enumerate(results):
        mag[idx // 6, :, idx % 6] = ratios
    return TFMatrix(frequencies=grid, magnitude=mag)


def slope_fit(frequencies, magnitude_db, f_lo, f_hi):
    """Least-squares slope in dB/decade of magnitude over [f_lo, f_hi]."""
    frequencies = np.asarray(frequencies, dtype=float)
    magnitude_db = np.asarray(magnitude_db, dtype=float)
    mask = (frequencies >= f_lo) & (frequencies <= f_hi)
    if np.count_nonzero(mask) < 5:
        raise ValueError(
            f"need at least 5 grid points in [{f_lo}, {f_hi}] Hz, "
            f"got {np.count_nonzero(mask)}"
        )
    return float(np.polyfit(np.log10(frequencies[mask]), magnitude_db[mask], 1)[0])


@dataclass(frozen=True)
class ZeroPatternReport:
    """Result of checking the structurally zero cells against the noise floor."""

    floor_db: float
    worst_cell: tuple
    worst_db: float
    violations: tuple  # ((out, in, max_db) ...) above the floor

    @property
    def passed(self):
        return not self.violations


def zero_pattern_check(tfm, floor_db=NOISE_FLOOR_DB):
    """Verify the structural zeros stay below the noise floor at every frequency."""
    db = tfm.db()
    worst_cell, worst_db = None, -math.inf
    violations = []
    for q, j in STRUCTURAL_ZEROS:
        peak = float(db[:, q, j].max())
        if peak > worst_db:
            worst_cell, worst_db = (q, j), peak
        if peak > floor_db:
            violations.append((q, j, peak))
    return ZeroPatternReport(
        floor_db=floor_db,
        worst_cell=worst_cell,
        worst_db=worst_db,
        violations=tuple(violations),
    )
