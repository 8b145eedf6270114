import csv
import re
import subprocess
import sys

import numpy as np
import pytest

from ladderline.cli import main, preset_text
from ladderline.config import config_from_header, parse_config

MINIMAL = """\
line.R = 2.5e-3
line.L = 1.8e-6
line.G = 20e-6
line.C = 0.2e-9
line.length = 1170
line.generations = {n}
source.frequency = 2300
load = {load}
"""


def run_cli(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(line for line in text.splitlines() if not line.startswith("#")))
    return rows[0], rows[1:]


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestExitCodes:
    def test_ok(self, capsys):
        status, out, _ = run_cli(capsys, "simulate", "--preset", "reference")
        assert status == 0 and out.startswith("# ladderline ")

    def test_unknown_command(self, capsys):
        assert run_cli(capsys, "explode", "--preset", "reference")[0] == 2

    def test_missing_source(self, capsys):
        assert run_cli(capsys, "simulate")[0] == 2

    def test_bad_config_reports_location(self, capsys, tmp_path):
        path = write_cfg(tmp_path, MINIMAL.format(n=5, load=500) + "line.Q = 1\n")
        status, out, err = run_cli(capsys, "simulate", "--config", path)
        assert status == 2 and out == ""
        assert err.startswith(f"{path}:9:1:")

    def test_singular_network(self, capsys, tmp_path):
        # unit R and G over 1 m: a -0.5 ohm load makes the input impedance exactly zero
        text = "line.R = 1\nline.L = 0\nline.G = 1\nline.C = 0\nline.length = 1\n"
        text += "line.generations = 1\nsource.frequency = 50\nload = -0.5\n"
        status, out, err = run_cli(capsys, "simulate", "--config", write_cfg(tmp_path, text))
        assert status == 3 and out == "" and "singular" in err

    def test_missing_config_file(self, capsys, tmp_path):
        assert run_cli(capsys, "simulate", "--config", str(tmp_path / "absent.cfg"))[0] == 4

    def test_unwritable_output(self, capsys, tmp_path):
        target = tmp_path / "no" / "such" / "dir.csv"
        assert run_cli(capsys, "simulate", "--preset", "reference", "--out", str(target))[0] == 4

    def test_unsupported_train_spacing(self, capsys, tmp_path):
        path = write_cfg(tmp_path, MINIMAL.format(n=50, load=500))
        status, _, err = run_cli(capsys, "train", "--config", path)
        assert status == 2 and "spacing" in err


class TestOutput:
    def test_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["validate", "--preset", "reference", "--out", str(a)]) == 0
        assert main(["validate", "--preset", "reference", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()

    def test_header_round_trip(self, capsys):
        _, out, _ = run_cli(capsys, "sweep", "--preset", "track")
        assert config_from_header(out) == parse_config(preset_text("track"))

    def test_train(self, capsys):
        status, out, err = run_cli(capsys, "train", "--preset", "track")
        header, rows = parse_csv(out)
        assert status == 0 and header == ["t", "receiver_imax"]
        assert len(rows) == 136
        t = np.array([float(r[0]) for r in rows])
        np.testing.assert_allclose(t, np.arange(1, 137) / 10, rtol=1e-14)
        baseline = float(re.search(r"baseline receiver Imax = (\S+)", err).group(1))
        assert all(float(r[1]) < baseline for r in rows)

    def test_train_warns_on_receiver_anchor(self, capsys, tmp_path):
        text = preset_text("track").replace("anchor.kind = transmitter", "anchor.kind = receiver")
        _, _, err = run_cli(capsys, "train", "--config", write_cfg(tmp_path, text))
        assert "warning" in err

    def test_simulate_matches_validate_ladder_columns(self, capsys):
        _, sim, _ = run_cli(capsys, "simulate", "--preset", "reference")
        _, val, _ = run_cli(capsys, "validate", "--preset", "reference", "--generations", "50")
        sim_header, sim_rows = parse_csv(sim)
        val_header, val_rows = parse_csv(val)
        assert val_header == ["x", "vmax_analytic", "imax_analytic", "vmax_ladder_50", "imax_ladder_50"]
        assert [r[4] for r in sim_rows] == [r[3] for r in val_rows]
        assert [r[7] for r in sim_rows] == [r[4] for r in val_rows]

    def test_validate_union_of_nodes(self, capsys):
        _, out, err = run_cli(capsys, "validate", "--preset", "reference", "--generations", "5,10")
        header, rows = parse_csv(out)
        assert len(rows) == 11
        assert float(rows[0][0]) == 1170 and float(rows[-1][0]) == 0
        # odd nodes of n=10 have no n=5 counterpart
        assert rows[1][3] == "" and rows[2][3] != ""
        errors = [float(v) for v in re.findall(r"E\(\d+\) = (\S+)", err)]
        assert errors[0] > errors[1]

    def test_sweep(self, capsys):
        _, out, _ = run_cli(capsys, "sweep", "--preset", "track")
        header, rows = parse_csv(out)
        f = [float(r[0]) for r in rows]
        assert len(rows) == 41 and f[0] == pytest.approx(100) and f[-1] == pytest.approx(10000)
        assert all(float(r[3]) > 0 for r in rows)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ladderline", "simulate", "--preset", "reference"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    header, rows = parse_csv(proc.stdout)
    assert len(rows) == 51
    assert float(rows[-1][4]) == pytest.approx(110, rel=1e-14)
