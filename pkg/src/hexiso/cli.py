"""Command-line interface, configuration schema and TSV emission.

Exit codes: 0 success, 1 validation/usage error, 2 numerical failure.
"""

import argparse
import configparser
import math
import os
import sys

import numpy as np

from . import bipod2d, structure, tfx
from .coremath import GimbalLockError, SingularSystemError
from .model3d import ConfigurationError, GeometryParams, PayloadProperties, build_hexapod
from .presets import BipodPreset, UnknownPresetError, load_preset, preset_names
from .simulate import CHANNELS, ExcitationSpec, IntegrationError, integrate, modal_analysis
from .tfx import OUT_CHANNELS

OUTDIR_ENV = "HEXISO_OUTDIR"


class CliError(ValueError):
    """Invalid arguments or configuration (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


# -- value parsing -------------------------------------------------------------

def parse_angle(text):
    """Angle with an explicit unit suffix: '90 deg', '0.5 rad', 'pi/6 rad'.

    Plain '0' is accepted unit-free. Pi fractions like 'pi/2', '2pi/5' and
    '3*pi/4' are understood in the numeric part.
    """
    s = str(text).strip().lower()
    if s in ("0", "0.0", "-0", "+0"):
        return 0.0
    unit = None
    for suffix in ("deg", "rad"):
        if s.endswith(suffix):
            unit = suffix
            s = s[: -len(suffix)].strip()
            break
    if unit is None:
        raise CliError(
            f"angle {text!r} needs an explicit unit suffix ('deg' or 'rad')"
        )
    value = _parse_pi_expression(s)
    return math.radians(value) if unit == "deg" else value


def _parse_pi_expression(s):
    s = s.replace(" ", "")
    if not s:
        raise CliError("empty angle value")
    sign = 1.0
    if s[0] in "+-":
        sign = -1.0 if s[0] == "-" else 1.0
        s = s[1:]
    num, den = s, None
    if "/" in s:
        num, den = s.split("/", 1)
    def _numerator(p):
        if "pi" not in p:
            return float(p)
        head = p.replace("*", "").removesuffix("pi")
        return (float(head) if head else 1.0) * math.pi
    try:
        value = _numerator(num)
        if den is not None:
            value /= float(den)
    except ValueError as exc:
        raise CliError(f"cannot parse angle value {s!r}") from exc
    return sign * value


def _parse_float(section, key, text):
    try:
        return float(text)
    except ValueError as exc:
        raise CliError(f"[{section}] {key} = {text!r} is not a number") from exc


# -- configuration files -------------------------------------------------------

STRUT_KEYS = ("k", "c", "L", "m_t", "m_b", "eta_t", "eta_b", "I_t", "I_b")
ANGLE_KEYS = ("beta", "gamma", "phi_t")


def read_config(path):
    """Parse a flat key/value model configuration.

    Sections: [strut] (k, c, L, m_t, m_b, eta_t, eta_b, I_t, I_b),
    [payload] (m_p, I_x, I_y, I_z), [geometry] (r_t, beta, gamma, phi_t,
    cm_below_platform). Angles take an explicit deg/rad suffix.
    """
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise CliError(f"cannot read configuration file {path!r}")
    try:
        strut_raw = dict(cp["strut"])
        payload_raw = dict(cp["payload"])
    except KeyError as exc:
        raise CliError(f"configuration {path!r} is missing section {exc}") from exc

    strut_kwargs = {}
    for key in STRUT_KEYS:
        if key.lower() in strut_raw:
            strut_kwargs[key] = _parse_float("strut", key, strut_raw[key.lower()])
    try:
        strut = bipod2d.StrutProperties(**strut_kwargs)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid [strut] section: {exc}") from exc

    try:
        payload = PayloadProperties(
            m_p=_parse_float("payload", "m_p", payload_raw["m_p"]),
            principal_inertia=tuple(
                _parse_float("payload", k, payload_raw[k]) for k in ("i_x", "i_y", "i_z")
            ),
        )
    except KeyError as exc:
        raise CliError(f"[payload] section is missing key {exc}") from exc
    except ValueError as exc:
        raise CliError(f"invalid [payload] section: {exc}") from exc

    geometry = None
    if cp.has_section("geometry"):
        geo_raw = dict(cp["geometry"])
        kwargs = {}
        for key in ("r_t", "L", "cm_below_platform"):
            if key.lower() in geo_raw:
                kwargs[key] = _parse_float("geometry", key, geo_raw[key.lower()])
        for key in ANGLE_KEYS:
            if key.lower() in geo_raw:
                kwargs[key] = parse_angle(geo_raw[key.lower()])
        try:
            geometry = GeometryParams(**kwargs)
        except (TypeError, ValueError) as exc:
            raise CliError(f"invalid [geometry] section: {exc}") from exc
    return strut, payload, geometry


def resolve_model(args):
    """Model from --preset or --config per the parsed arguments."""
    formulation = getattr(args, "formulation", "link")
    if args.preset:
        try:
            model = load_preset(args.preset, formulation=formulation)
        except UnknownPresetError as exc:
            raise CliError(str(exc.args[0])) from exc
        if isinstance(model, BipodPreset):
            raise CliError(
                f"preset {args.preset!r} is a planar bipod; this analysis needs a hexapod"
            )
        return model
    strut, payload, geometry = read_config(args.config)
    if geometry is None:
        raise CliError("configuration has no [geometry] section; cannot build a hexapod")
    return build_hexapod(geometry, strut, payload, formulation=formulation)


def resolve_bipod(args):
    """Planar bipod inputs from --preset or --config."""
    if args.preset:
        try:
            preset = load_preset(args.preset)
        except UnknownPresetError as exc:
            raise CliError(str(exc.args[0])) from exc
        if not isinstance(preset, BipodPreset):
            raise CliError(f"preset {args.preset!r} is not a planar bipod")
        return preset.strut, preset.m_p
    strut, payload, _ = read_config(args.config)
    return strut, payload.m_p


# -- TSV emission ----------------------------------------------------------------

def write_series(path, headers, columns):
    """Write aligned columns as UTF-8 TSV.

    `headers` name each column with its unit; line 1 is '#'-prefixed. Numbers
    are written with 17 significant digits so they re-parse bit-exactly.
    """
    columns = [np.asarray(col) for col in columns]
    if len(headers) != len(columns):
        raise ValueError("one header per column required")
    lengths = {len(c) for c in columns}
    if len(lengths) > 1:
        raise ValueError(f"columns differ in length: {sorted(lengths)}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("# " + "\t".join(headers) + "\n")
            for row in zip(*columns):
                fh.write("\t".join(f"{v:.17g}" for v in row) + "\n")
    except OSError as exc:
        raise CliError(f"cannot write {path!r}: {exc}") from exc
    return path


def read_series(path):
    """Parse a write_series file back into (headers, (n, k) array)."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ValueError(f"{path!r} has no '#' header line")
        headers = first[1:].strip().split("\t")
        rows = [line.split("\t") for line in fh.read().split("\n") if line]
    data = np.array([[float(v) for v in row] for row in rows]) if rows else np.empty((0, len(headers)))
    return headers, data


def _outdir(args):
    base = args.outdir or os.environ.get(OUTDIR_ENV) or "."
    os.makedirs(base, exist_ok=True)
    return base


# -- subcommands -----------------------------------------------------------------

def _cmd_bipod2d_tf(args):
    strut, m_p = resolve_bipod(args)
    alpha = parse_angle(args.alpha)
    coeffs = bipod2d.bipod_coefficients(strut, m_p)
    grid = tfx.default_grid(args.fmin, args.fmax, args.points_per_decade)

    def mag_db(values):
        return 20.0 * np.log10(np.maximum(np.abs(values), 1e-300))

    axial = np.array([bipod2d.tf_axial(coeffs, strut, f) for f in grid])
    shear = np.array([bipod2d.tf_shear(coeffs, strut, f) for f in grid])
    total = np.array([
        bipod2d.total_force_magnitude(np.add(*bipod2d.tf_base_joints(coeffs, strut, f, alpha)))
        for f in grid
    ])
    ideal = np.array([bipod2d.tf_massless_ideal(strut, m_p, f) for f in grid])

    path = args.out or os.path.join(_outdir(args), "bipod2d_tf.tsv")
    write_series(
        path,
        ["frequency [Hz]", "axial [dB]", "shear [dB]", "total [dB]", "idealised [dB]"],
        [grid, mag_db(axial), mag_db(shear), mag_db(total), mag_db(ideal)],
    )
    f_res = math.sqrt((coeffs.lam + 1.0) * strut.k / coeffs.m_dyn) / (2.0 * math.pi)
    print(f"coefficients: m_dyn = {coeffs.m_dyn:.6g} kg, I_s = {coeffs.I_s:.6g} kg m^2, "
          f"lambda = {coeffs.lam:.6g}")
    if coeffs.lam > 0:
        print(f"shear plateau: {20.0 * math.log10(coeffs.lam):.2f} dB "
              f"(resonance near {f_res:.3g} Hz)")
    else:
        print("massless links: no shear plateau (lambda = 0)")
    print(f"wrote {path}")
    return 0


def _parse_kv(pairs, allowed):
    out = {}
    for token in pairs:
        if "=" not in token:
            raise CliError(f"expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        if key not in allowed:
            raise CliError(f"unknown key {key!r}; expected one of {sorted(allowed)}")
        out[key] = value
    return out


def _parse_joint_freedoms(text):
    freedoms = []
    for item in text.split(","):
        item = item.strip()
        if "x" in item:
            count, dof = item.split("x", 1)
            freedoms.extend([int(dof)] * int(count))
        elif item:
            freedoms.append(int(item))
    return freedoms


def _cmd_check(args):
    if args.maxwell is None and args.mobility is None:
        raise CliError("choose one of --maxwell or --mobility")
    if args.maxwell is not None:
        kv = _parse_kv(args.maxwell, {"j", "s", "r"})
        missing = {"j", "s", "r"} - kv.keys()
        if missing:
            raise CliError(f"--maxwell needs j=, s=, r= (missing {sorted(missing)})")
        counts = structure.Maxwell2DCounts(
            joints=int(kv["j"]), members=int(kv["s"]), reactions=int(kv["r"])
        )
        n, classification = structure.maxwell_2d(counts)
        print(f"n={n}, {classification}")
    if args.mobility is not None:
        kv = _parse_kv(args.mobility, {"n", "b", "f"})
        missing = {"n", "b", "f"} - kv.keys()
        if missing:
            raise CliError(f"--mobility needs n=, b=, f= (missing {sorted(missing)})")
        counts = structure.Mobility3DCounts(
            moving_bodies=int(kv["n"]),
            internal_dofs=int(kv["b"]),
            joint_freedoms=_parse_joint_freedoms(kv["f"]),
        )
        print(f"M={structure.mobility_3d(counts)}")
    return 0


def _cmd_modes(args):
    model = resolve_model(args)
    modes = modal_analysis(model)
    print(f"{'#':>2}  {'f [Hz]':>8}  {'zeta':>8}  axes")
    for i, m in enumerate(modes, 1):
        print(f"{i:>2}  {m.frequency_hz:8.3f}  {m.damping_ratio:8.5f}  {m.label}")
    if args.tsv:
        write_series(
            args.tsv,
            ["mode [-]", "frequency [Hz]", "damping_ratio [-]"],
            [np.arange(1, len(modes) + 1),
             [m.frequency_hz for m in modes],
             [m.damping_ratio for m in modes]],
        )
        print(f"wrote {args.tsv}")
    return 0


def _cmd_tf_point(args):
    model = resolve_model(args)
    point = tfx.tf_point(
        model, args.input, args.output, args.freq,
        amplitude=args.amplitude, ramp_time=args.ramp,
        cycles_after_ramp=args.cycles, rel_tol=args.rel_tol,
    )
    print(f"H[{point.out_channel},{point.in_channel}]({point.frequency_hz:g} Hz): "
          f"amplitude {point.amplitude:.6g}, ratio {point.ratio:.6g} = {point.db:.3f} dB")
    return 0


def _cmd_tf_matrix(args):
    model = resolve_model(args)
    grid = tfx.default_grid(args.fmin, args.fmax, args.points_per_decade)
    tfm = tfx.tf_matrix(model, grid, jobs=args.jobs, rel_tol=args.rel_tol,
                        amplitude=args.amplitude)
    outdir = _outdir(args)
    db = tfm.db()
    for q in range(6):
        for j in range(6):
            write_series(
                os.path.join(outdir, f"H_{q + 1}_{j + 1}.tsv"),
                ["frequency [Hz]",
                 f"|H_{q + 1},{j + 1}| [dB re {OUT_CHANNELS[q]}/{CHANNELS[j]}]"],
                [grid, db[:, q, j]],
            )
    report = tfx.zero_pattern_check(tfm)
    status = "pass" if report.passed else f"FAIL ({len(report.violations)} cells)"
    print(f"zero-pattern check vs {report.floor_db:.0f} dB floor: {status}; "
          f"worst cell H_{report.worst_cell[0] + 1},{report.worst_cell[1] + 1} "
          f"at {report.worst_db:.1f} dB")
    print(f"wrote 36 series to {outdir}")
    return 0


def _cmd_simulate(args):
    model = resolve_model(args)
    ramp = args.ramp if args.ramp is not None else 40.0 / args.freq
    duration = args.duration if args.duration is not None else ramp + 15.0 / args.freq
    spec = ExcitationSpec(channel=args.input, frequency_hz=args.freq,
                          amplitude=args.amplitude, ramp_time=ramp, duration=duration)
    traj = integrate(model, spec, rel_tol=args.rel_tol)
    reactions = traj.reaction_series()
    path = args.out or os.path.join(_outdir(args), "trajectory.tsv")
    state_names = [
        "x [m]", "y [m]", "z [m]", "psi [rad]", "theta [rad]", "phi [rad]",
        "vx [m/s]", "vy [m/s]", "vz [m/s]",
        "wx [rad/s]", "wy [rad/s]", "wz [rad/s]",
    ]
    reaction_names = ["Fx [N]", "Fy [N]", "Fz [N]",
                      "Mx [N m]", "My [N m]", "Mz [N m]"]
    write_series(
        path,
        ["time [s]", *state_names, *reaction_names],
        [traj.t, *[traj.y[:, i] for i in range(12)],
         *[reactions[:, i] for i in range(6)]],
    )
    print(f"wrote {path}")
    return 0


# -- parser wiring -----------------------------------------------------------------

def _add_model_source(p, bipod=False):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", help="built-in model name")
    group.add_argument("--config", help="model configuration file")
    if not bipod:
        p.add_argument("--formulation", choices=("link", "bipod"), default="link",
                       help="per-link or per-pair bookkeeping (default link)")


def build_parser():
    parser = _Parser(
        prog="hexiso",
        description="Microvibration transmission through pin-slider isolation platforms",
    )
    parser.add_argument("--outdir", default=None,
                        help=f"output directory (default ${OUTDIR_ENV} or '.')")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bipod2d-tf", help="closed-form planar bipod transfer functions")
    _add_model_source(p, bipod=True)
    p.add_argument("--alpha", default="0", help="input force angle (e.g. '30 deg', 'pi/4 rad')")
    p.add_argument("--fmin", type=float, default=0.1)
    p.add_argument("--fmax", type=float, default=1000.0)
    p.add_argument("--points-per-decade", type=int, default=30)
    p.add_argument("--out", help="output TSV path")
    p.set_defaults(func=_cmd_bipod2d_tf)

    p = sub.add_parser("check", help="determinacy/mobility counts")
    p.add_argument("--maxwell", nargs="*", metavar="K=V",
                   help="planar rule from j= s= r= counts")
    p.add_argument("--mobility", nargs="*", metavar="K=V",
                   help="spatial mobility from n= b= f= (f: '2,2,3' or '6x2,6x3')")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("modes", help="natural frequencies and mode axes")
    _add_model_source(p)
    p.add_argument("--tsv", help="also write the table as TSV")
    p.set_defaults(func=_cmd_modes)

    p = sub.add_parser("tf-point", help="one transfer-function point")
    _add_model_source(p)
    p.add_argument("--input", required=True, choices=CHANNELS)
    p.add_argument("--output", required=True, choices=OUT_CHANNELS)
    p.add_argument("--freq", type=float, required=True, help="Hz")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--ramp", type=float, default=None, help="ramp time [s] (default auto)")
    p.add_argument("--cycles", type=float, default=15.0, help="post-ramp cycles")
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_tf_point)

    p = sub.add_parser("tf-matrix", help="full 6x6 transfer-function sweep")
    _add_model_source(p)
    p.add_argument("--fmin", type=float, default=0.1)
    p.add_argument("--fmax", type=float, default=1000.0)
    p.add_argument("--points-per-decade", type=int, default=30)
    p.add_argument("--jobs", type=int, default=None, help="parallel workers (default all cores)")
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--amplitude", type=float, default=1.0,
                   help="drive amplitude [N or N m]; small values suppress "
                        "harmonic distortion in the structurally zero cells")
    p.set_defaults(func=_cmd_tf_matrix)

    p = sub.add_parser("simulate", help="raw trajectory export")
    _add_model_source(p)
    p.add_argument("--input", required=True, choices=CHANNELS)
    p.add_argument("--freq", type=float, required=True, help="Hz")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--ramp", type=float, default=None, help="ramp time [s] (default 40 cycles)")
    p.add_argument("--duration", type=float, default=None, help="total time [s]")
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--out", help="output TSV path")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ConfigurationError, UnknownPresetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, SingularSystemError, GimbalLockError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
