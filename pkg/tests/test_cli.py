import csv
import io
import math
from pathlib import Path

import pytest
from click.testing import CliRunner

from qndsim.cli import main

DATA = Path(__file__).parent / "data"


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSweep:
    def test_row_count(self):
        res = invoke("sweep", "--protocol", "number", "--gamma", "0,0.1,1,10",
                     "--eta2", "0.5:1.0:51")
        assert res.exit_code == 0
        rows = parse_csv(res.output)
        assert len(rows) == 204

    def test_byte_identical_reruns(self):
        args = ("sweep", "--protocol", "number", "--eta2", "0.5:1.0:11")
        assert invoke(*args).output == invoke(*args).output

    def test_header(self):
        res = invoke("sweep", "--protocol", "number", "--eta2", "0.5:1.0:2")
        assert res.output.splitlines()[0] == (
            "protocol,eta2,gamma,theta,success_prob,fidelity_sim,fidelity_closed,abs_diff"
        )

    def test_reference_row(self):
        res = invoke("sweep", "--protocol", "number", "--gamma", "0",
                     "--eta2", "0.5:1.0:51")
        rows = [r for r in parse_csv(res.output)
                if abs(float(r["eta2"]) - 0.88) < 1e-9]
        assert len(rows) == 1
        assert float(rows[0]["fidelity_sim"]) == pytest.approx(0.8929, abs=1e-4)
        assert float(rows[0]["fidelity_closed"]) == pytest.approx(0.8929, abs=1e-4)

    def test_perfect_detectors_row(self):
        res = invoke("sweep", "--protocol", "number", "--gamma", "0,10",
                     "--eta2", "0.5:1.0:2")
        for row in parse_csv(res.output):
            if float(row["eta2"]) == 1.0:
                assert float(row["fidelity_sim"]) == pytest.approx(1.0, abs=1e-12)

    def test_rows_ordered_by_gamma_then_eta2(self):
        res = invoke("sweep", "--protocol", "number", "--gamma", "1,0",
                     "--eta2", "0.5:1.0:3")
        keys = [(float(r["gamma"]), float(r["eta2"])) for r in parse_csv(res.output)]
        assert keys == [(1.0, 0.5), (1.0, 0.75), (1.0, 1.0),
                        (0.0, 0.5), (0.0, 0.75), (0.0, 1.0)]

    def test_pol_sweep(self):
        res = invoke("sweep", "--protocol", "pol", "--gamma", "0",
                     "--eta2", "0.5:1.0:2")
        assert res.exit_code == 0
        rows = parse_csv(res.output)
        assert rows[-1]["theta"] == "pi/2;0"
        assert float(rows[-1]["fidelity_sim"]) == pytest.approx(1.0, abs=1e-12)

    def test_out_file(self, tmp_path):
        target = tmp_path / "sweep.csv"
        res = invoke("sweep", "--protocol", "number", "--eta2", "0.5:1.0:2",
                     "--out", str(target))
        assert res.exit_code == 0
        assert target.read_text().startswith("protocol,")

    def test_invalid_range_usage_error(self):
        assert invoke("sweep", "--protocol", "number", "--eta2", "0.9:0.5:5").exit_code == 2
        assert invoke("sweep", "--protocol", "number", "--eta2", "junk").exit_code == 2
        assert invoke("sweep", "--protocol", "bogus").exit_code == 2


class TestRun:
    def test_number_at_third_transmission(self):
        res = invoke("run", "number", "--input", "0,1,0", "-T", "0.3333", "--eta2", "1")
        assert res.exit_code == 0
        value = float(res.output.split("success_probability ")[1].split()[0])
        assert value == pytest.approx(0.1481, abs=1e-3)

    def test_pol_defaults(self):
        res = invoke("run", "pol", "--gamma", "0", "--eta2", "1")
        assert res.exit_code == 0
        assert "success_probability 0.0219478737997" in res.output
        assert "fidelity 1" in res.output

    def test_kerr_tau_via_run(self):
        res = invoke("run", "kerr-tau", "--omega", "3e15", "--dt", "3e-11",
                     "--chi3", "2e-22", "--volume", "1e-7")
        assert res.exit_code == 0
        assert float(res.output.split()[-1]) == pytest.approx(1.6e-18, rel=0.01)

    def test_teleport_pol(self):
        res = invoke("run", "teleport-pol", "--gamma", "0", "--epsilon", "0.01")
        assert res.exit_code == 0
        assert "fidelity 1" in res.output

    def test_unknown_protocol_usage_error(self):
        assert invoke("run", "warp").exit_code == 2

    def test_runtime_error_exit_one(self):
        res = invoke("run", "number", "--input", "0,1,0", "-T", "1.0")
        assert res.exit_code == 1

    def test_conflicting_input_flags(self):
        assert invoke("run", "number", "--input", "0,1,0", "--gamma", "2").exit_code == 2


class TestCircuit:
    def test_four_mode_dump(self):
        res = invoke("circuit", str(DATA / "four_mode_interferometer.qc"))
        assert res.exit_code == 0
        lines = res.output.splitlines()
        assert lines[0] == "channels a b c d"
        assert lines[1].split()[0] == "0.707106781187+0i"

    def test_state_evolution(self):
        res = invoke("circuit", str(DATA / "four_mode_interferometer.qc"),
                     "--amp", "0,0,1,1=1")
        assert res.exit_code == 0
        assert "|0,1,0,1> 0.5+0i" in res.output
        assert "|1,0,1,0> -0.5+0i" in res.output

    def test_parse_error_exit_two(self, tmp_path):
        bad = tmp_path / "bad.qc"
        bad.write_text("mode a\nmode c\nbs a c T=1.5\n")
        res = invoke("circuit", str(bad))
        assert res.exit_code == 2
        assert "transmission out of range" in res.output

    def test_missing_file_usage_error(self):
        assert invoke("circuit", "/nonexistent.qc").exit_code == 2


class TestCalculatorCommands:
    def test_kerr_tau(self):
        res = invoke("kerr-tau", "--omega", "3e15", "--dt", "3e-11",
                     "--chi3", "2e-22", "--volume", "1e-7")
        assert res.exit_code == 0
        assert float(res.output) == pytest.approx(1.6e-18, rel=0.01)

    def test_noon_bound(self):
        res = invoke("noon-bound", "1")
        assert float(res.output) == pytest.approx(math.pi / 2)
        assert invoke("noon-bound", "0").exit_code == 1
