import csv
import io
import json
import math

import numpy as np
import pytest

from magcasimir.cli import RunConfig, ValidationError, main, validate
from magcasimir.output import phase_map_from_json, serialize_phase_map
from magcasimir.phase import SweepAxis, sweep


def run(capsysbinary, *argv):
    code = main(list(argv))
    out, err = capsysbinary.readouterr()
    return code, out.decode(), err.decode()


class TestPointCommands:
    def test_slab_conductors(self, capsysbinary):
        code, out, _ = run(capsysbinary, "slab", "--eps1", "1e8", "--mu1", "1", "--eps2", "1e8", "--mu2", "1")
        assert code == 0
        rec = json.loads(out)
        assert set(rec) == {"command", "inputs", "coefficient", "sign", "warnings"}
        assert rec["inputs"] == {"eps1": 1e8, "mu1": 1.0, "eps2": 1e8, "mu2": 1.0}
        assert rec["coefficient"] == pytest.approx(-1.3708e-2, rel=3e-3)
        assert rec["sign"] == "attractive"

    def test_slab_si(self, capsysbinary):
        code, out, _ = run(
            capsysbinary, "slab", "--eps1", "1e8", "--mu1", "1", "--eps2", "1", "--mu2", "1e8", "--si", "--a-meters", "1e-7"
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["sign"] == "repulsive"
        assert rec["si"]["pressure_Pa"] > 0
        assert rec["inputs"]["a_meters"] == 1e-7

    def test_si_requires_separation(self, capsysbinary):
        code, _, err = run(capsysbinary, "slab", "--eps1", "2", "--mu1", "1", "--eps2", "2", "--mu2", "1", "--si")
        assert code == 2 and "a_meters" in err

    def test_crossover(self, capsysbinary):
        code, out, _ = run(capsysbinary, "crossover", "--a-meters", "1e-7")
        rec = json.loads(out)
        assert code == 0
        assert 1.7e3 < rec["coefficient"] < 1.9e3
        assert rec["sign"] is None

    @pytest.mark.parametrize(
        "argv,sign",
        [
            (["pair", "--alpha-e-a", "1", "--alpha-m-a", "0", "--alpha-e-b", "0", "--alpha-m-b", "1", "--r", "1"], "repulsive"),
            (["balls", "--eps1", "2", "--mu1", "1", "--eps2", "3", "--mu2", "100"], "attractive"),
            (["uvl", "--mu1", "3", "--mu2", "0.3333333333"], "repulsive"),
            (["impedance", "--z1", "0.05", "--z2", "20"], "repulsive"),
            (["conductor", "--z1", "0.01"], "attractive"),
            (["hight", "--eps1", "2", "--mu1", "1", "--eps2", "3", "--mu2", "50"], "attractive"),
        ],
    )
    def test_commands(self, capsysbinary, argv, sign):
        code, out, _ = run(capsysbinary, *argv)
        assert code == 0
        assert json.loads(out)["sign"] == sign

    def test_csv_record(self, capsysbinary):
        code, out, _ = run(capsysbinary, "conductor", "--z1", "2", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert rows[0] == ["command", "z1", "coefficient", "sign"]
        assert rows[1][0] == "conductor" and rows[1][3] == "repulsive"

    def test_uvl_warns_on_stderr(self, capsysbinary):
        code, out, err = run(capsysbinary, "uvl", "--mu1", "3", "--mu2", "2")
        assert code == 0
        assert "warning" in err and "epsilon" in err

    @pytest.mark.parametrize(
        "argv,key",
        [
            (["slab", "--eps1", "-1", "--mu1", "1", "--eps2", "2", "--mu2", "1"], "eps1"),
            (["slab", "--eps1", "2", "--mu1", "1", "--eps2", "2"], "mu2"),
            (["pair", "--alpha-e-a", "-1", "--alpha-m-a", "0", "--alpha-e-b", "0", "--alpha-m-b", "1", "--r", "1"], "alpha_e_a"),
            (["crossover", "--a-meters", "0"], "a_meters"),
            (["slab", "--eps1", "2", "--mu1", "1", "--eps2", "2", "--mu2", "1", "--quad-nodes", "4"], "quad_nodes"),
        ],
    )
    def test_validation_exit(self, capsysbinary, argv, key):
        code, out, err = run(capsysbinary, *argv)
        assert code == 2
        assert out == ""
        assert key in err

    def test_numerics_exit(self, capsysbinary):
        code, out, err = run(
            capsysbinary, "slab", "--eps1", "1e10", "--mu1", "1", "--eps2", "1", "--mu2", "1e10",
            "--quad-nodes", "8", "--quad-max-nodes", "8",
        )
        assert code == 3 and out == ""
        assert "converge" in err

    def test_quad_cap_below_start(self, capsysbinary):
        code, _, err = run(
            capsysbinary, "slab", "--eps1", "2", "--mu1", "1", "--eps2", "2", "--mu2", "1",
            "--quad-nodes", "32", "--quad-max-nodes", "16",
        )
        assert code == 2 and "quad_max_nodes" in err


class TestBoundary:
    def test_conductor_root(self, capsysbinary):
        code, out, _ = run(capsysbinary, "boundary", "--engine", "conductor", "--z1-min", "0.5", "--z1-max", "2", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert rows[0] == ["z1", "coefficient"]
        assert len(rows) == 2
        assert float(rows[1][0]) == pytest.approx(1.037, abs=1e-3)

    def test_swept_boundary_json(self, capsysbinary):
        code, out, _ = run(
            capsysbinary, "boundary", "--engine", "impedance",
            "--z1-min", "0.01", "--z1-max", "0.8", "--z1-count", "11", "--z1-scale", "log",
            "--z2-min", "1", "--z2-max", "1000", "--bracket", "z2",
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["connected"] and doc["residual"] < 1e-9
        assert len(doc["points"]) == 11
        assert set(doc["points"][0]) == {"z1", "z2", "coefficient"}

    def test_no_root_exit(self, capsysbinary):
        code, _, err = run(capsysbinary, "boundary", "--engine", "impedance", "--z1", "1", "--z2-min", "0.5", "--z2-max", "2")
        assert code == 3 and "no sign change" in err

    def test_ambiguous_bracket(self, capsysbinary):
        code, _, err = run(
            capsysbinary, "boundary", "--engine", "impedance", "--z1-min", "0.1", "--z1-max", "0.5", "--z2-min", "1", "--z2-max", "10"
        )
        assert code == 2 and "bracket" in err

    def test_preset(self, capsysbinary):
        code, out, _ = run(capsysbinary, "boundary", "--preset", "conductor")
        assert code == 0
        assert json.loads(out)["points"][0]["z1"] == pytest.approx(1.0375, abs=1e-4)


def vacuum_map():
    return sweep("exact", SweepAxis("eps2", 1, 2, 2), SweepAxis("mu2", 1, 2, 2), {"eps1": 1.0, "mu1": 1.0})


class TestPhaseMapOutput:
    def test_vacuum_csv(self):
        text = serialize_phase_map(vacuum_map(), "csv").decode()
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["x", "y", "coefficient", "sign"]
        assert len(rows) == 5
        assert all(float(r[2]) == 0.0 and r[3] == "zero" for r in rows[1:])
        # row-major: x varies fastest
        assert [r[:2] for r in rows[1:3]] == [["1.0", "1.0"], ["2.0", "1.0"]]

    def test_json_round_trip(self):
        pm = sweep("exact", SweepAxis("eps2", 1.5, 80, 4), SweepAxis("mu2", 1, 90, 3), {"eps1": 2.0, "mu1": 1.0})
        back = phase_map_from_json(serialize_phase_map(pm, "json"))
        assert back.axis_x == pm.axis_x and back.axis_y == pm.axis_y
        assert back.fixed == pm.fixed and back.engine == pm.engine
        assert np.array_equal(back.coefficients, pm.coefficients)
        assert back.quadrature == pm.quadrature

    def test_json_metadata(self):
        doc = json.loads(serialize_phase_map(vacuum_map(), "json"))
        assert doc["tool"] == "magcasimir" and "version" in doc
        assert doc["axes"]["x"]["scale"] == "linear"
        assert doc["fixed"] == {"eps1": 1.0, "mu1": 1.0}
        assert doc["quadrature"]["tolerance"] == 1e-10

    def test_holes_round_trip(self):
        pm = vacuum_map()
        pm.coefficients[0, 1] = math.nan
        text = serialize_phase_map(pm, "json")
        assert b"NaN" not in text
        back = phase_map_from_json(text)
        assert math.isnan(back.coefficients[0, 1])
        assert "nan,indeterminate" in serialize_phase_map(pm, "csv").decode()

    def test_cli_map(self, capsysbinary):
        code, out, _ = run(
            capsysbinary, "phase-map", "--engine", "impedance", "--x", "z2", "--y", "z1",
            "--z1-min", "0.1", "--z1-max", "10", "--z1-count", "3", "--z2-min", "0.1", "--z2-max", "10", "--z2-count", "4",
            "--format", "csv",
        )
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 13
        assert float(rows[2][0]) == pytest.approx(3.4) and rows[2][1] == "0.1"

    @pytest.mark.parametrize(
        "argv",
        [
            ["phase-map", "--engine", "exact", "--eps2-min", "1", "--eps2-max", "5", "--eps1", "2", "--mu1", "1"],
            ["phase-map", "--engine", "exact", "--eps2-min", "1", "--eps2-max", "5", "--mu2-min", "1", "--mu2-max", "5", "--eps1", "2"],
            ["phase-map", "--engine", "impedance", "--z1-min", "1", "--z1-max", "0.5", "--z2-min", "1", "--z2-max", "5"],
            ["phase-map", "--engine", "exact", "--eps2-min", "1", "--mu2-min", "1", "--mu2-max", "5", "--eps1", "2", "--mu1", "1"],
        ],
    )
    def test_map_validation(self, capsysbinary, argv):
        code, out, _ = run(capsysbinary, *argv)
        assert code == 2 and out == ""


class TestBatch:
    def write_config(self, tmp_path, entries):
        path = tmp_path / "runs.json"
        path.write_text(json.dumps(entries))
        return str(path)

    def test_batch_is_byte_identical(self, tmp_path, capsysbinary):
        entries = lambda tag: [
            {
                "command": "phase-map",
                "parameters": {
                    "engine": "exact", "eps1": 0.5, "mu1": 1.0,
                    "eps2_min": 1.0, "eps2_max": 50.0, "eps2_count": 4,
                    "mu2_min": 1.0, "mu2_max": 80.0, "mu2_count": 3,
                },
                "output": {"format": "json", "path": str(tmp_path / f"map_{tag}.json")},
            },
            {
                "command": "slab",
                "parameters": {"eps1": 2, "mu1": 1, "eps2": 3, "mu2": 50},
                "output": {"format": "csv", "path": str(tmp_path / f"slab_{tag}.csv")},
            },
        ]
        assert main(["--config", self.write_config(tmp_path, entries("a"))]) == 0
        assert main(["--config", self.write_config(tmp_path, entries("b"))]) == 0
        for stem, ext in (("map", "json"), ("slab", "csv")):
            a = (tmp_path / f"{stem}_a.{ext}").read_bytes()
            b = (tmp_path / f"{stem}_b.{ext}").read_bytes()
            assert a == b
        # the non-physical warning stays out of the data file
        assert b"warning" not in (tmp_path / "map_a.json").read_bytes()

    def test_batch_validates_before_running(self, tmp_path, capsysbinary):
        first = tmp_path / "first.json"
        entries = [
            {"command": "crossover", "parameters": {"a_meters": 1e-7}, "output": {"path": str(first)}},
            {"command": "slab", "parameters": {"eps1": 2, "mu1": 1, "eps2": 2}, "output": {"path": str(tmp_path / "x.json")}},
        ]
        code = main(["--config", self.write_config(tmp_path, entries)])
        _, err = capsysbinary.readouterr()
        assert code == 2 and "mu2" in err.decode()
        assert not first.exists()

    def test_batch_needs_paths(self, tmp_path, capsysbinary):
        entries = [{"command": "crossover", "parameters": {"a_meters": 1e-7}}]
        assert main(["--config", self.write_config(tmp_path, entries)]) == 2

    def test_batch_numerics(self, tmp_path, capsysbinary):
        entries = [
            {
                "command": "phase-map",
                "parameters": {
                    "engine": "exact", "eps1": 1.0, "mu1": 1e10, "strict": True, "quad_nodes": 8, "quad_max_nodes": 8,
                    "eps2_min": 1e10, "eps2_max": 2e10, "eps2_count": 2, "mu2_min": 1.0, "mu2_max": 2.0, "mu2_count": 2,
                },
                "output": {"path": str(tmp_path / "m.json")},
            }
        ]
        code = main(["--config", self.write_config(tmp_path, entries)])
        _, err = capsysbinary.readouterr()
        assert code == 3 and "eps2=" in err.decode()
        assert not (tmp_path / "m.json").exists()

    def test_unwritable_output(self, tmp_path, capsysbinary):
        code, _, err = run(capsysbinary, "crossover", "--a-meters", "1e-7", "--out", str(tmp_path / "missing" / "x.json"))
        assert code == 1 and "missing" in err


def test_validate_unknown_command():
    with pytest.raises(ValidationError):
        validate(RunConfig("explode"))
