import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest

from qdfaraday import protocol
from qdfaraday.cavity import CavityParams
from qdfaraday.cli import SPECTRUM_COLUMNS, fmt9, main
from qdfaraday.qstate import make_spin_state

GOLDEN = Path(__file__).parent / "data" / "spectrum_default.csv"
HEADER = "detuning,cold_modulus,cold_phase,hot_modulus,hot_phase,theta_up,theta_down"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_header_constant():
    assert ",".join(SPECTRUM_COLUMNS) == HEADER


@pytest.mark.parametrize("x, s", [(math.pi, "3.14159265"), (-0.0, "0"), (0.1, "0.1"), (1e-20, "1e-20"), (-2.5, "-2.5")])
def test_fmt9(x, s):
    assert fmt9(x) == s


class TestSpectrum:
    def test_default_matches_golden(self, capsys):
        code, out, _ = run(["spectrum"], capsys)
        assert code == 0
        assert out == GOLDEN.read_text()
        lines = out.split("\n")
        assert lines[0] == HEADER
        assert len(lines) == 1001 + 2  # header, rows, trailing newline
        assert out.endswith("\n") and "\r" not in out

    def test_golden_against_mpmath(self):
        mp.mp.dps = 30
        rows = list(csv.reader(GOLDEN.read_text().splitlines()))[1:]
        for row in rows[::50]:
            d = mp.mpf(row[0])
            fld = -mp.mpc(0, 1) * d
            cold = (fld - mp.mpf(0.5)) / (fld + mp.mpf(0.5))
            dip = -mp.mpc(0, 1) * d + mp.mpf("0.15")
            hot = 1 - dip / (dip * (fld + mp.mpf(0.5)) + 25)
            ref = [abs(cold), mp.arg(cold), abs(hot), mp.arg(hot)]
            if d == 0:
                ref[1] = mp.pi
            for got, want in zip(map(float, row[1:5]), ref):
                assert got == pytest.approx(float(want), rel=1e-8, abs=1e-9)

    def test_resonance_row(self, capsys):
        _, out, _ = run(["spectrum"], capsys)
        row = [r for r in csv.DictReader(io.StringIO(out)) if float(r["detuning"]) == 0][0]
        assert float(row["cold_phase"]) == pytest.approx(3.141592654, abs=1e-8)
        assert float(row["hot_phase"]) == 0

    def test_byte_identical_in_subprocess(self, tmp_path):
        outs = []
        for i in range(2):
            target = tmp_path / f"s{i}.csv"
            subprocess.run([sys.executable, "-m", "qdfaraday", "spectrum", "--output", str(target)], check=True)
            outs.append(target.read_bytes())
        assert outs[0] == outs[1] == GOLDEN.read_bytes()

    def test_points_one(self, capsys):
        code, out, err = run(["spectrum", "--points", "1"], capsys)
        assert code == 2
        assert "points must be ≥ 2" in err
        assert out == ""

    def test_bad_range(self, capsys):
        code, _, err = run(["spectrum", "--min", "3", "--max", "1"], capsys)
        assert code == 2

    def test_grid(self, capsys):
        _, out, _ = run(["spectrum", "--points", "5"], capsys)
        rows = list(csv.reader(out.splitlines()))
        assert [r[0] for r in rows[1:]] == ["-10", "-5", "0", "5", "10"]
        assert all(len(r) == 7 for r in rows)

    def test_unwrap(self, capsys):
        _, out, _ = run(["spectrum", "--unwrap-phase", "--points", "2001"], capsys)
        rows = list(csv.reader(out.splitlines()))
        assert rows[0] == HEADER.split(",")
        cold = np.array([float(r[2]) for r in rows[1:]])
        assert np.max(np.abs(np.diff(cold))) < 0.2

    def test_json(self, capsys):
        _, out, _ = run(["spectrum", "--points", "3", "--out", "json"], capsys)
        data = json.loads(out)
        assert data["columns"] == list(SPECTRUM_COLUMNS)
        assert data["rows"][1][2] == math.pi


class TestFaraday:
    def test_quarter_turn(self, capsys):
        code, out, _ = run(["faraday", "--detuning", "-0.5", "--spin", "0.70710678,0,0.70710678,0"], capsys)
        assert code == 0
        r = json.loads(out)
        assert r["theta_up"] == pytest.approx(math.pi / 4, abs=0.02)
        assert r["theta_down"] == -r["theta_up"]
        assert r["p_plus"] == pytest.approx(0.5, abs=1e-12)
        assert r["p_minus"] == pytest.approx(0.5, abs=1e-12)
        assert r["phi_0"] == pytest.approx(math.pi / 2, abs=1e-15)

    def test_up(self, capsys):
        _, out, _ = run(["faraday", "--spin", "1,0,0,0"], capsys)
        assert json.loads(out)["p_plus"] == 1

    def test_g_zero_warns(self, capsys):
        code, out, err = run(["faraday", "--g", "0"], capsys)
        assert code == 0
        r = json.loads(out)
        assert r["theta_up"] == 0
        assert "no Faraday rotation" in r["warning"]
        assert "no Faraday rotation" in err

    def test_csv(self, capsys):
        _, out, _ = run(["faraday", "--out", "csv"], capsys)
        header, row = out.splitlines()
        assert "theta_up" in header.split(",")
        assert len(header.split(",")) == len(row.split(","))

    def test_bad_spin(self, capsys):
        code, _, _ = run(["faraday", "--spin", "1,0,0"], capsys)
        assert code == 2


class TestReadout:
    def test_seventy(self, capsys):
        a, b = math.sqrt(0.7), math.sqrt(0.3)
        _, out, _ = run(["readout", "--spin", f"{a!r},0,{b!r},0"], capsys)
        r = json.loads(out)
        assert r["p_f"] == pytest.approx(0.4, abs=1e-12)

    def test_mixture(self, capsys):
        _, out, _ = run(["readout", "--ensemble", "0.5:1,0,0,0", "--ensemble", "0.5:0,0,1,0"], capsys)
        assert json.loads(out)["p_f"] == 0

    def test_bad_weights(self, capsys):
        code, _, err = run(["readout", "--ensemble", "0.5:1,0,0,0", "--ensemble", "0.4:0,0,1,0"], capsys)
        assert code == 2
        assert "sum to 1" in err


class TestEntangle:
    def test_two_nodes_ideal(self, capsys):
        code, out, _ = run(["entangle"], capsys)
        assert code == 0
        r = json.loads(out)
        o = r["outcomes"]["deg0"]
        assert o["probability"] == pytest.approx(0.5, abs=1e-12)
        assert o["concurrence"] == pytest.approx(1, abs=1e-9)
        assert r["survival_probability"] == 1

    def test_sorted_keys(self, capsys):
        _, out, _ = run(["entangle"], capsys)
        data = json.loads(out)
        assert out == json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def test_three_nodes_diag(self, capsys):
        _, out, _ = run(["entangle", "--nodes", "3", "--basis", "diag"], capsys)
        o = json.loads(out)["outcomes"]["plus45"]
        for cut in ("0", "1", "2"):
            assert o["entropy"][cut] == pytest.approx(1, abs=1e-9)

    def test_physical(self, capsys):
        _, out, _ = run(["entangle", "--mode", "physical", "--g", "5"], capsys)
        r = json.loads(out)
        assert r["survival_probability"] < 1
        assert r["detuning"] == 0.5
        for o in r["outcomes"].values():
            assert o["fidelity_vs_ideal"] >= 0.99

    def test_spin_flag(self, capsys):
        _, out, _ = run(["entangle", "--spin", "0:1,0,0,0"], capsys)
        r = json.loads(out)
        assert r["nodes"][0]["spin"] == [[1.0, 0.0], [0.0, 0.0]]
        assert r["outcomes"]["deg0"]["concurrence"] == pytest.approx(0, abs=1e-10)

    @pytest.mark.parametrize(
        "argv",
        [
            ["entangle", "--spin", "0:1,0"],
            ["entangle", "--spin", "1,0,0,0"],
            ["entangle", "--spin", "5:1,0,0,0"],
            ["entangle", "--spin", "0:0,0,0,0"],
            ["entangle", "--nodes", "1"],
            ["entangle", "--nodes", "13"],
            ["entangle", "--phi", "1,2,3"],
            ["entangle", "--out", "csv"],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        code, _, _ = run(argv, capsys)
        assert code == 2

    def test_argparse_error_is_two(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["entangle", "--mode", "quantum"])
        assert info.value.code == 2

    def test_round_trip(self, capsys):
        argv = ["entangle", "--nodes", "3", "--spin", "1:0.3,0.1,-0.5,0.2", "--basis", "diag", "--phi", "1.2,1.4,1.6"]
        _, out, _ = run(argv, capsys)
        data = json.loads(out)
        spins = [make_spin_state(1, 1), make_spin_state(0.3 + 0.1j, -0.5 + 0.2j), make_spin_state(1, 1)]
        nodes = [protocol.NodeConfig(CavityParams(), s) for s in spins]
        res = protocol.run_chain(nodes, [protocol.IdealMode(p) for p in (1.2, 1.4, 1.6)], basis_pair="diag")
        for label, o in res.outcomes.items():
            got = data["outcomes"][label]
            assert abs(got["probability"] - o.probability) <= 1e-12
            amps = np.array([complex(*p) for p in got["post_state"]])
            assert np.max(np.abs(amps - o.post_spins)) <= 1e-12
            for cut, s in o.entropies.items():
                assert abs(got["entropy"][cut] - s) <= 1e-12

    def test_deterministic(self, capsys):
        _, a, _ = run(["entangle", "--mode", "physical", "--nodes", "4"], capsys)
        _, b, _ = run(["entangle", "--mode", "physical", "--nodes", "4"], capsys)
        assert a == b


class TestConfigFile:
    def test_nodes_from_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.yaml"
        cfg.write_text(
            "mode: physical\n"
            "detuning: 0.5\n"
            "nodes:\n"
            "  - {g: 20, gamma: 0.3, spin: [1, 0, 1, 0]}\n"
            "  - {g: 20, gamma: 0.3, spin: [1, 0, 1, 0]}\n"
            "  - {g: 20, gamma: 0.3}\n"
        )
        _, out, _ = run(["entangle", "--config", str(cfg)], capsys)
        r = json.loads(out)
        assert r["n_spins"] == 3
        assert [n["g"] for n in r["nodes"]] == [20, 20, 20]

    def test_flags_override_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"g": 0.0, "detuning": 3.0}))
        _, out, _ = run(["faraday", "--config", str(cfg), "--g", "5", "--detuning", "-0.5"], capsys)
        r = json.loads(out)
        assert r["detuning"] == -0.5
        assert r["theta_up"] == pytest.approx(math.pi / 4, abs=0.02)

    def test_flag_overrides_node_value(self, tmp_path, capsys):
        cfg = tmp_path / "run.yaml"
        cfg.write_text("nodes:\n  - {g: 20}\n  - {g: 20}\n")
        _, out, _ = run(["entangle", "--config", str(cfg), "--g", "7"], capsys)
        assert [n["g"] for n in json.loads(out)["nodes"]] == [7, 7]

    def test_phi_precedence(self, tmp_path, capsys):
        cfg = tmp_path / "run.yaml"
        cfg.write_text("phi: 1.0\nnodes:\n  - {phi: 2.0}\n  - {}\n")
        _, out, _ = run(["entangle", "--config", str(cfg)], capsys)
        assert [n["phi"] for n in json.loads(out)["nodes"]] == [2.0, 1.0]
        _, out, _ = run(["entangle", "--config", str(cfg), "--phi", "0.5"], capsys)
        assert [n["phi"] for n in json.loads(out)["nodes"]] == [0.5, 0.5]

    def test_spectrum_keys(self, tmp_path, capsys):
        cfg = tmp_path / "s.yaml"
        cfg.write_text("points: 3\nmin: -1\nmax: 1\n")
        _, out, _ = run(["spectrum", "--config", str(cfg)], capsys)
        assert len(out.splitlines()) == 4

    @pytest.mark.parametrize("text", ["[1, 2]", "g: [oops\n", "g: .nan\n", "points: 1\n"])
    def test_bad_file(self, tmp_path, capsys, text):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text(text)
        code, _, _ = run(["spectrum", "--config", str(cfg)], capsys)
        assert code == 2

    def test_missing_file(self, capsys):
        code, _, _ = run(["spectrum", "--config", "/nonexistent/x.yaml"], capsys)
        assert code == 2


def test_output_path(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(["readout", "--output", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["p_f"] == pytest.approx(0, abs=1e-15)


def test_computation_error_is_one(capsys, monkeypatch):
    from qdfaraday import cli
    from qdfaraday.errors import SimulationError

    def boom(cfg):
        raise SimulationError("forced")

    monkeypatch.setattr(cli, "faraday_report", boom)
    code, _, err = run(["faraday"], capsys)
    assert code == 1
    assert "forced" in err
