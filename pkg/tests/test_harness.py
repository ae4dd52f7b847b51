import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from dampedeuler import cli, harness
from dampedeuler.dynamics import SYMMETRIC
from dampedeuler.errors import ParseError, ValidationError

QUICK = """
[law]
kind = logarithmic

[damping]
mu = 3.0

[initial]
epsilon = 0.0
R = 1.0

[grid]
x_min = -6.0
x_max = 6.0
n = 128

[solver]
cfl = 0.4
t_end = 2.0
snapshot_stride = 4

[output]
directory = {outdir}
csv = true
svg = {svg}
"""


def write_quick(tmp_path, epsilon="0.0", mu="3.0", svg="false", extra=""):
    text = QUICK.format(outdir=tmp_path / "out", svg=svg)
    text = text.replace("epsilon = 0.0", f"epsilon = {epsilon}")
    text = text.replace("mu = 3.0", f"mu = {mu}")
    path = tmp_path / "run.cfg"
    path.write_text(text + extra)
    return path


class TestLoadConfig:
    def test_minimal_defaults(self, tmp_path):
        path = tmp_path / "min.cfg"
        path.write_text("[law]\nkind = logarithmic\n[damping]\nmu = 3\n"
                        "[initial]\nepsilon = 0.05\n")
        rc = harness.load_config(path)
        assert rc.law.kind == "logarithmic" and rc.law.A == -1.0 and rc.law.K1 == 1.0
        assert rc.damping.mu == 3.0 and rc.damping.lam == 1.0
        assert rc.initial.epsilon == 0.05 and rc.initial.R == 1.0
        assert rc.grid.x_min == -60.0 and rc.grid.x_max == 60.0 and rc.grid.n == 2000
        assert rc.solver.cfl == 0.4 and rc.solver.t_end == 50.0
        assert rc.solver.snapshot_stride == 10 and rc.solver.limiter == "minmod"
        assert rc.formulation == SYMMETRIC and rc.m == 3
        assert rc.thresholds.gradient == 1e6
        assert rc.output.csv is True and rc.output.svg is False

    def test_gamma_to_exponent(self, tmp_path):
        path = tmp_path / "poly.cfg"
        path.write_text("[law]\nkind = polytropic\ngamma = 3.0\n")
        assert harness.load_config(path).law.A == 2.0
        path.write_text("[law]\nkind = chaplygin\ngamma = 1.0\n")
        assert harness.load_config(path).law.A == -2.0

    def test_gamma_exponent_conflict(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[law]\nkind = polytropic\ngamma = 3.0\nA = 1.0\n")
        with pytest.raises(ValidationError):
            harness.load_config(path)

    def test_gamma_meaningless_for_log(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[law]\nkind = logarithmic\ngamma = 2.0\n")
        with pytest.raises(ValidationError):
            harness.load_config(path)

    def test_unknown_section_and_key(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[laws]\nkind = logarithmic\n")
        with pytest.raises(ValidationError, match="laws"):
            harness.load_config(path)
        path.write_text("[law]\nkindd = logarithmic\n")
        with pytest.raises(ValidationError, match="kindd"):
            harness.load_config(path)

    def test_bad_value_names_field(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[damping]\nmu = strong\n")
        with pytest.raises(ValidationError, match="mu"):
            harness.load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            harness.load_config(tmp_path / "nope.cfg")

    def test_unparseable(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("law]\nkind : = logarithmic\n")
        with pytest.raises(ParseError):
            harness.load_config(path)

    def test_density_validated_at_load(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[initial]\nepsilon = 0.5\nprofile = bump_derivative\n")
        with pytest.raises(ValidationError, match="NonPositiveDensity"):
            harness.load_config(path)

    def test_regime_notices(self, tmp_path, caplog):
        path = tmp_path / "warn.cfg"
        path.write_text("[damping]\nmu = 1.0\n[diagnostics]\nm = 2\n")
        with caplog.at_level("WARNING", logger="dampedeuler"):
            harness.load_config(path)
        text = caplog.text
        assert "mu=1" in text
        assert "m=2" in text

    def test_custom_profile_path(self, tmp_path):
        table = tmp_path / "wave.txt"
        xs = np.linspace(-0.5, 0.5, 11)
        np.savetxt(table, np.column_stack([xs, 0.5 * np.cos(np.pi * xs)]))
        path = tmp_path / "custom.cfg"
        path.write_text(f"[initial]\nepsilon = 0.05\nprofile = {table}\n")
        rc = harness.load_config(path)
        assert rc.initial.profile == "custom"
        assert rc.profile_path == str(table)


class TestCmdRun:
    def test_quiet_run_exit_zero(self, tmp_path, capsys):
        code = harness.cmd_run(write_quick(tmp_path))
        assert code == 0
        out = tmp_path / "out"
        rows = (out / "run.csv").read_text().splitlines()
        assert rows[0].split(",") == harness.CSV_COLUMNS
        data = np.genfromtxt(out / "run.csv", delimiter=",", names=True)
        for col in ("e_inst", "ell_inst", "E_m", "L_m", "ratio"):
            assert np.all(data[col] == 0.0)
        summary = json.loads((out / "result.json").read_text())
        assert summary["schema_version"] == 1
        assert summary["status"] == "CompletedGlobal"
        assert summary["blowup"] is None
        assert "CompletedGlobal" in capsys.readouterr().out

    def test_blowup_exit_two(self, tmp_path):
        cfg = tmp_path / "blow.cfg"
        cfg.write_text(
            "[damping]\nmu = 0.0\n[initial]\nepsilon = 1.0\n"
            "[grid]\nx_min = -16\nx_max = 16\nn = 1600\n"
            "[solver]\nt_end = 20.0\nsnapshot_stride = 10\n"
            f"[output]\ndirectory = {tmp_path / 'bout'}\n"
        )
        assert harness.cmd_run(cfg) == 2
        summary = json.loads((tmp_path / "bout" / "result.json").read_text())
        assert summary["status"] == "BlowupDetected"
        assert summary["blowup"]["kind"] is not None
        assert 0.0 < summary["blowup"]["t"] < 20.0

    def test_error_exit_one(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[law]\nkind = unobtainium\n")
        assert harness.cmd_run(bad) == 1

    def test_reproducible_csv(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        harness.cmd_run(cfg, outdir=tmp_path / "a")
        harness.cmd_run(cfg, outdir=tmp_path / "b")
        assert (tmp_path / "a" / "run.csv").read_bytes() == (
            tmp_path / "b" / "run.csv"
        ).read_bytes()

    def test_svg_output(self, tmp_path):
        code = harness.cmd_run(write_quick(tmp_path, epsilon="0.05", svg="true"))
        assert code == 0
        for name in ("energy.svg", "ratio.svg"):
            root = ET.parse(tmp_path / "out" / name).getroot()
            assert root.tag.endswith("svg")
            assert any(child.tag.endswith("polyline") for child in root.iter())

    def test_env_var_outdir(self, tmp_path, monkeypatch):
        monkeypatch.setenv(harness.OUTDIR_ENV, str(tmp_path / "envdir"))
        assert harness.cmd_run(write_quick(tmp_path)) == 0
        assert (tmp_path / "envdir" / "result.json").exists()

    def test_conservative_formulation(self, tmp_path):
        cfg = write_quick(
            tmp_path, epsilon="0.05",
            extra="\n[solver]\nformulation = conservative\nt_end = 2.0\n",
        )
        # configparser rejects duplicate sections; rebuild cleanly instead
        cfg.write_text(
            "[initial]\nepsilon = 0.05\n"
            "[grid]\nx_min = -6\nx_max = 6\nn = 128\n"
            "[solver]\nt_end = 2.0\nsnapshot_stride = 4\nformulation = conservative\n"
            f"[output]\ndirectory = {tmp_path / 'cons'}\n"
        )
        assert harness.cmd_run(cfg) == 0
        summary = json.loads((tmp_path / "cons" / "result.json").read_text())
        assert summary["formulation"] == "conservative"
        assert summary["status"] == "CompletedGlobal"


class TestCmdSweep:
    def test_single_cell_sweep_matches_run(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        code = harness.cmd_sweep(cfg, {"mu": ["3.0"]}, outdir=tmp_path / "sw")
        assert code == harness.cmd_run(cfg, outdir=tmp_path / "single")
        rows = (tmp_path / "sw" / "sweep.csv").read_text().splitlines()
        assert rows[0].split(",") == harness.SWEEP_COLUMNS
        assert len(rows) == 2

    def test_product_order_and_statuses(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        code = harness.cmd_sweep(
            cfg, {"mu": ["3.0", "5.0"], "epsilon": ["0.0", "0.05"]},
            outdir=tmp_path / "sw",
        )
        assert code == 0
        rows = (tmp_path / "sw" / "sweep.csv").read_text().splitlines()[1:]
        cells = [r.split(",") for r in rows]
        assert [(c[0], c[2]) for c in cells] == [
            ("3.0", "0.0"),
            ("3.0", "0.05"),
            ("5.0", "0.0"),
            ("5.0", "0.05"),
        ]
        assert all(c[4] == "CompletedGlobal" for c in cells)

    def test_law_sweep(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        code = harness.cmd_sweep(
            cfg, {"law": ["logarithmic", "polytropic", "chaplygin"]},
            outdir=tmp_path / "sw",
        )
        assert code == 0
        rows = (tmp_path / "sw" / "sweep.csv").read_text().splitlines()[1:]
        assert [r.split(",")[3] for r in rows] == ["logarithmic", "polytropic", "chaplygin"]

    def test_empty_vary_rejected(self, tmp_path):
        cfg = write_quick(tmp_path)
        assert harness.cmd_sweep(cfg, {}) == 1
        assert harness.cmd_sweep(cfg, {"mu": []}) == 1

    def test_unknown_key_rejected(self, tmp_path):
        assert harness.cmd_sweep(write_quick(tmp_path), {"cfl": ["0.4"]}) == 1

    def test_cap(self, tmp_path):
        cfg = write_quick(tmp_path)
        assert harness.cmd_sweep(cfg, {"mu": ["1", "2", "3"]}, cap=2) == 1

    def test_per_run_error_recorded(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        code = harness.cmd_sweep(
            cfg, {"epsilon": ["0.05", "-1.0"]}, outdir=tmp_path / "sw"
        )
        assert code == 1
        rows = (tmp_path / "sw" / "sweep.csv").read_text().splitlines()[1:]
        assert rows[0].split(",")[4] == "CompletedGlobal"
        bad = rows[1].split(",")
        assert bad[4] == "Error"
        assert bad[8] != ""

    def test_reproducible_sweep(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        harness.cmd_sweep(cfg, {"mu": ["3.0", "4.0"]}, outdir=tmp_path / "a")
        harness.cmd_sweep(cfg, {"mu": ["3.0", "4.0"]}, outdir=tmp_path / "b")
        assert (tmp_path / "a" / "sweep.csv").read_bytes() == (
            tmp_path / "b" / "sweep.csv"
        ).read_bytes()

    def test_workers_do_not_change_output(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        harness.cmd_sweep(cfg, {"mu": ["3.0", "4.0", "5.0"]}, outdir=tmp_path / "seq")
        harness.cmd_sweep(
            cfg, {"mu": ["3.0", "4.0", "5.0"]}, outdir=tmp_path / "par", workers=2
        )
        assert (tmp_path / "seq" / "sweep.csv").read_bytes() == (
            tmp_path / "par" / "sweep.csv"
        ).read_bytes()


class TestCli:
    def test_run_subcommand(self, tmp_path):
        assert cli.main(["run", str(write_quick(tmp_path))]) == 0

    def test_sweep_subcommand(self, tmp_path):
        cfg = write_quick(tmp_path, epsilon="0.05")
        code = cli.main(
            ["sweep", str(cfg), "--vary", "mu=3.0,5.0", "--outdir", str(tmp_path / "sw")]
        )
        assert code == 0
        assert (tmp_path / "sw" / "sweep.csv").exists()

    def test_check_subcommand(self, capsys):
        assert cli.main(["check", "transform"]) == 0
        assert "PASS transform" in capsys.readouterr().out

    def test_bad_vary_syntax(self, tmp_path):
        with pytest.raises(SystemExit):
            cli.main(["sweep", str(write_quick(tmp_path)), "--vary", "mu:3"])
