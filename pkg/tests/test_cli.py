import math
import os

import numpy as np
import pytest

from hexiso import load_preset, natural_frequencies
from hexiso.cli import (
    CliError,
    main,
    parse_angle,
    read_config,
    read_series,
    write_series,
)
from hexiso.model3d import build_hexapod


class TestParseAngle:
    def test_degrees(self):
        assert parse_angle("90 deg") == pytest.approx(math.pi / 2)

    def test_radians(self):
        assert parse_angle("0.75 rad") == 0.75

    def test_pi_fractions(self):
        assert parse_angle("pi/6 rad") == pytest.approx(math.pi / 6)
        assert parse_angle("2pi/5 rad") == pytest.approx(2 * math.pi / 5)
        assert parse_angle("-pi rad") == pytest.approx(-math.pi)
        assert parse_angle("3*pi/4 rad") == pytest.approx(3 * math.pi / 4)

    def test_zero_needs_no_unit(self):
        assert parse_angle("0") == 0.0

    def test_missing_unit_rejected(self):
        with pytest.raises(CliError, match="unit suffix"):
            parse_angle("1.5")


class TestWriteSeries:
    def test_round_trip_is_exact(self, tmp_path, rng):
        path = tmp_path / "series.tsv"
        f = np.logspace(-1, 3, 50)
        vals = rng.normal(size=50) * 10.0 ** rng.integers(-12, 12, size=50)
        write_series(path, ["frequency [Hz]", "magnitude [dB]"], [f, vals])
        headers, data = read_series(path)
        assert headers == ["frequency [Hz]", "magnitude [dB]"]
        assert np.array_equal(data[:, 0], f)
        assert np.array_equal(data[:, 1], vals)

    def test_empty_series_is_header_only(self, tmp_path):
        path = tmp_path / "empty.tsv"
        write_series(path, ["time [s]", "x [m]"], [[], []])
        headers, data = read_series(path)
        assert headers == ["time [s]", "x [m]"]
        assert data.shape == (0, 2)

    def test_mismatched_columns_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="length"):
            write_series(tmp_path / "bad.tsv", ["a", "b"], [[1.0], [1.0, 2.0]])


CONFIG_HEXAPOD_1 = """
[strut]
k = 5000.0
c = 7.2
L = 0.3
m_t = 0.6
m_b = 0.4
eta_t = 0.7
eta_b = 0.2
I_t = 2.5e-3
I_b = 1.9e-3

[payload]
m_p = 25.0
I_x = 0.7608
I_y = 0.7608
I_z = 0.48

[geometry]
r_t = 0.245
beta = 90 deg
gamma = {gamma!r} rad
phi_t = 0
L = 0.3
cm_below_platform = 0.030
"""


class TestConfig:
    def test_config_model_equals_preset(self, tmp_path):
        path = tmp_path / "hexapod.cfg"
        path.write_text(CONFIG_HEXAPOD_1.format(gamma=float(np.arctan(np.sqrt(2.0)))))
        strut, payload, geometry = read_config(path)
        model = build_hexapod(geometry, strut, payload)
        preset = load_preset("hexapod-1-cubic")
        assert np.allclose(model.R, preset.R, atol=1e-15)
        assert np.allclose(model.d, preset.d, atol=1e-15)
        f_cfg = [f for f, _ in natural_frequencies(model)]
        f_pre = [f for f, _ in natural_frequencies(preset)]
        assert f_cfg == pytest.approx(f_pre, rel=1e-12)

    def test_missing_section_reported(self, tmp_path):
        path = tmp_path / "broken.cfg"
        path.write_text("[strut]\nk = 1000\nc = 0\nL = 0.3\n")
        with pytest.raises(CliError, match="payload"):
            read_config(path)

    def test_bad_number_reported(self, tmp_path):
        path = tmp_path / "broken.cfg"
        path.write_text("[strut]\nk = abc\nc=0\nL=0.3\n[payload]\nm_p=1\nI_x=1\nI_y=1\nI_z=1\n")
        with pytest.raises(CliError, match="not a number"):
            read_config(path)


class TestMain:
    def test_check_maxwell(self, capsys):
        assert main(["check", "--maxwell", "j=3", "s=2", "r=4"]) == 0
        assert "n=0, isostatic candidate" in capsys.readouterr().out

    def test_check_mobility(self, capsys):
        assert main(["check", "--mobility", "n=7", "b=6", "f=6x2,6x3"]) == 0
        assert "M=6" in capsys.readouterr().out

    def test_check_requires_a_mode(self, capsys):
        assert main(["check"]) == 1

    def test_modes_table(self, capsys, tmp_path):
        tsv = tmp_path / "modes.tsv"
        assert main(["modes", "--preset", "hexapod-1-cubic", "--tsv", str(tsv)]) == 0
        out = capsys.readouterr().out
        assert "translation-z" in out and "rotation-z" in out
        _, data = read_series(tsv)
        assert data[:, 1] == pytest.approx([2.17, 2.17, 2.90, 3.31, 3.31, 5.46], rel=0.02)

    def test_bipod2d_tf_output(self, capsys, tmp_path):
        out_file = tmp_path / "tf.tsv"
        code = main(["bipod2d-tf", "--preset", "bipod-table1", "--alpha", "0",
                     "--out", str(out_file)])
        assert code == 0
        text = capsys.readouterr().out
        assert "lambda = 0.00543595" in text
        assert "-45.29 dB" in text
        headers, data = read_series(out_file)
        assert len(headers) == 5
        assert data.shape == (121, 5)
        # static limits: axial near 0 dB, idealised near 0 dB, shear deep down
        assert data[0, 1] == pytest.approx(0.0, abs=0.05)
        assert data[0, 4] == pytest.approx(0.0, abs=0.05)
        assert data[0, 2] < -80.0

    def test_unknown_preset_exits_1(self, capsys):
        assert main(["modes", "--preset", "nope"]) == 1
        assert "available" in capsys.readouterr().err

    def test_wrong_model_kind_exits_1(self, capsys):
        assert main(["modes", "--preset", "bipod-table1"]) == 1

    def test_unknown_subcommand_exits_1(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_simulate_schema(self, tmp_path, capsys):
        out_file = tmp_path / "traj.tsv"
        code = main(["simulate", "--preset", "massless-hexapod-1-cubic",
                     "--input", "Fz", "--freq", "5", "--ramp", "1.0",
                     "--duration", "2.0", "--out", str(out_file)])
        assert code == 0
        headers, data = read_series(out_file)
        assert len(headers) == 19  # time + 12 states + 6 reactions
        assert headers[0] == "time [s]"
        assert data.shape[1] == 19
        assert data[0, 1:] == pytest.approx(np.zeros(18), abs=1e-15)

    def test_tf_point_runs(self, capsys):
        code = main(["tf-point", "--preset", "massless-hexapod-1-cubic",
                     "--input", "Fz", "--output", "Fz", "--freq", "40",
                     "--ramp", "1.0", "--cycles", "10"])
        assert code == 0
        assert "H[Fz,Fz](40 Hz)" in capsys.readouterr().out

    def test_outdir_env_var(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("HEXISO_OUTDIR", str(tmp_path / "envout"))
        assert main(["bipod2d-tf", "--preset", "bipod-table1"]) == 0
        assert (tmp_path / "envout" / "bipod2d_tf.tsv").exists()
