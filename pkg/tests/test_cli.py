"""Tests for the command-line front end."""

import json
import math

import pytest

from plural import cli

DEMO_GRAPH = {
    "tasks": [
        {"id": "work", "kind": "duplicable", "d": 64, "instructions": 1000,
         "reads": ["in[#]"], "writes": ["out[#]"]},
    ],
    "edges": [],
}


def run_cli(capsys, *args):
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


def write_graph(tmp_path, doc, name="graph.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


class TestSweep:
    def test_default_emits_fifteen_rows(self, capsys):
        code, out, _ = run_cli(capsys, "sweep")
        header, rows = csv_rows(out)
        assert code == 0
        assert header == cli.SWEEP_COLUMNS
        assert [r["m"] for r in rows] == [str(2**k) for k in range(15)]

    def test_speedup_column(self, capsys):
        _, out, _ = run_cli(capsys, "sweep", "--area", "1e6", "--work", "1", "--m", "1:16:x2")
        _, rows = csv_rows(out)
        speedups = [float(r["speedup"]) for r in rows]
        expected = [1.0, math.sqrt(2), 2.0, 2 * math.sqrt(2), 4.0]
        assert speedups == pytest.approx(expected, rel=1e-11)

    def test_single_row_ratios_are_one(self, capsys):
        _, out, _ = run_cli(capsys, "sweep", "--m", "1")
        _, rows = csv_rows(out)
        assert len(rows) == 1
        for col in ("speedup", "energydown", "powerdown", "es", "es2"):
            assert rows[0][col] == "1"

    def test_energydown_at_16384(self, capsys):
        _, out, _ = run_cli(capsys, "sweep", "--area", "1e6", "--m", "16384")
        _, rows = csv_rows(out)
        assert rows[0]["energydown"] == "16384"

    def test_byte_stable(self, capsys):
        _, first, _ = run_cli(capsys, "sweep", "--m", "1:256:x2")
        _, second, _ = run_cli(capsys, "sweep", "--m", "1:256:x2")
        assert first == second

    def test_explicit_list(self, capsys):
        _, out, _ = run_cli(capsys, "sweep", "--m", "3,5,9")
        _, rows = csv_rows(out)
        assert [r["m"] for r in rows] == ["3", "5", "9"]

    @pytest.mark.parametrize(
        "bad", ["", "0:4:x2", "4:1:x2", "1:16:y2", "1:16:x1", "a,b", "-3", "9,3", "4,4"]
    )
    def test_malformed_range_is_usage_error(self, capsys, bad):
        code, _, err = run_cli(capsys, "sweep", "--m", bad)
        assert code == 1
        assert "error" in err

    def test_invalid_area_is_input_error(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--area", "-5")
        assert code == 2
        assert "area" in err

    def test_plot_script(self, capsys, tmp_path):
        script = tmp_path / "plot.gp"
        code, _, _ = run_cli(capsys, "sweep", "--m", "1:4:x2", "--plot-script", str(script))
        assert code == 0
        assert "logscale" in script.read_text()

    def test_every_column_matches_library_value(self, capsys):
        from plural import ChipSpec, sweep

        _, out, _ = run_cli(capsys, "sweep", "--area", "3e4", "--work", "7", "--m", "1,3,10")
        _, rows = csv_rows(out)
        for row, metrics in zip(rows, sweep(ChipSpec(area=3e4, work=7), [1, 3, 10])):
            assert row["m"] == str(metrics.m)
            for col in cli.SWEEP_COLUMNS[1:]:
                assert row[col] == format(getattr(metrics, col), ".12g")


class TestCommSweep:
    def test_spot_values_at_1024(self, capsys):
        _, out, _ = run_cli(capsys, "comm-sweep", "--area", "1e6", "--m", "1024")
        header, rows = csv_rows(out)
        assert header == cli.COMM_COLUMNS
        assert float(rows[0]["sched_power"]) == 3.2e7
        assert float(rows[0]["mem_power"]) == 3.232e7

    def test_m1_access_energy_is_chip_edge(self, capsys):
        _, out, _ = run_cli(capsys, "comm-sweep", "--m", "1")
        _, rows = csv_rows(out)
        assert float(rows[0]["mem_access_energy"]) == 1000.0

    def test_sched_first_exceeds_compute_at_1024(self, capsys):
        _, out, _ = run_cli(capsys, "comm-sweep", "--area", "1e6")
        _, rows = csv_rows(out)
        crossing = [
            int(r["m"]) for r in rows if float(r["sched_power"]) > float(r["compute_power"])
        ]
        assert min(crossing) == 1024


class TestEt2Command:
    def test_stretch(self, capsys):
        code, out, _ = run_cli(capsys, "et2", "--e", "8", "--t", "2", "stretch:2")
        doc = json.loads(out)
        assert code == 0
        assert doc["before"] == {"energy": 8.0, "time": 2.0, "theta": 32.0, "power": 4.0}
        assert doc["after"]["energy"] == 2.0
        assert doc["after"]["time"] == 4.0
        assert doc["after"]["theta"] == 32.0

    def test_parallel_one_is_identity(self, capsys):
        _, out, _ = run_cli(capsys, "et2", "--e", "1", "--t", "1", "parallel:1")
        doc = json.loads(out)
        assert doc["after"]["ensemble"]["energy"] == 1.0
        assert doc["after"]["ensemble"]["time"] == 1.0
        assert doc["after"]["per_core"]["theta"] == 1.0

    def test_constrain_fixed_power(self, capsys):
        _, out, _ = run_cli(capsys, "et2", "--e", "8", "--t", "2", "constrain:P0=4")
        doc = json.loads(out)
        assert doc["after"]["time"] == pytest.approx(2.0, rel=1e-12)
        assert doc["after"]["energy"] == pytest.approx(8.0, rel=1e-12)

    @pytest.mark.parametrize("bad", ["warp:2", "stretch", "constrain:Q0=4", "constrain:P0=", "parallel:x"])
    def test_unknown_transform_is_usage_error(self, capsys, bad):
        code, _, err = run_cli(capsys, "et2", "--e", "1", "--t", "1", bad)
        assert code == 1
        assert "error" in err

    def test_domain_violation_is_input_error(self, capsys):
        code, _, _ = run_cli(capsys, "et2", "--e", "1", "--t", "1", "shrink:2")
        assert code == 2


class TestSimulate:
    def test_check_model_within_two_percent(self, capsys, tmp_path):
        path = write_graph(tmp_path, DEMO_GRAPH)
        code, out, err = run_cli(
            capsys, "simulate", path, "--m", "16", "--work", "64000", "--check-model"
        )
        doc = json.loads(out)
        assert code == 0
        assert err == ""
        assert doc["model_check"]["speedup_deviation"] < 0.02
        assert doc["empirical_speedup"] == pytest.approx(4.0, rel=1e-12)

    def test_m1_speedup_is_one(self, capsys, tmp_path):
        path = write_graph(tmp_path, DEMO_GRAPH)
        code, out, _ = run_cli(capsys, "simulate", path, "--m", "1")
        assert code == 0
        assert json.loads(out)["empirical_speedup"] == 1.0

    def test_crew_violations_warn_but_run(self, capsys, tmp_path):
        doc = {
            "tasks": [
                {"id": "w1", "kind": "singular", "instructions": 10, "writes": ["x"]},
                {"id": "w2", "kind": "singular", "instructions": 10, "writes": ["x"]},
            ],
            "edges": [],
        }
        path = write_graph(tmp_path, doc)
        code, out, err = run_cli(capsys, "simulate", path, "--m", "2")
        assert code == 0
        assert "WARNING: CREW violation" in err
        assert "write-write" in err
        assert json.loads(out)["total_instructions"] == 20

    def test_missing_file_is_input_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "simulate", str(tmp_path / "nope.json"), "--m", "2")
        assert code == 2
        assert "error" in err

    def test_parse_error_is_line_anchored(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "tasks": [,]\n}', encoding="utf-8")
        code, _, err = run_cli(capsys, "simulate", str(path), "--m", "2")
        assert code == 2
        assert "line 2" in err

    def test_cyclic_graph_is_input_error(self, capsys, tmp_path):
        doc = {
            "tasks": [
                {"id": "a", "kind": "singular", "instructions": 5},
                {"id": "b", "kind": "singular", "instructions": 5},
            ],
            "edges": [["a", "b"], ["b", "a"]],
        }
        path = write_graph(tmp_path, doc)
        code, _, err = run_cli(capsys, "simulate", path, "--m", "1")
        assert code == 2
        assert "cycle" in err

    def test_conditional_outcome_flag(self, capsys, tmp_path):
        doc = {
            "tasks": [
                {"id": "start", "kind": "singular", "instructions": 5},
                {"id": "pick", "kind": "control", "control_kind": "conditional"},
                {"id": "left", "kind": "singular", "instructions": 10},
                {"id": "right", "kind": "singular", "instructions": 20},
            ],
            "edges": [["start", "pick"], ["pick", "left"], ["pick", "right"]],
        }
        path = write_graph(tmp_path, doc)
        code, out, _ = run_cli(capsys, "simulate", path, "--m", "1", "--outcome", "pick=right")
        assert code == 0
        assert json.loads(out)["total_instructions"] == 25
        code, _, err = run_cli(capsys, "simulate", path, "--m", "1")
        assert code == 2
        assert "pick" in err

    def test_csv_report(self, capsys, tmp_path):
        path = write_graph(tmp_path, DEMO_GRAPH)
        code, out, _ = run_cli(capsys, "simulate", path, "--m", "4", "--csv")
        header, rows = csv_rows(out)
        assert code == 0
        assert header == cli.REPORT_CSV_COLUMNS
        assert len(rows) == 1
        assert rows[0]["m"] == "4"

    def test_emit_events(self, capsys, tmp_path):
        path = write_graph(tmp_path, DEMO_GRAPH)
        code, out, _ = run_cli(capsys, "simulate", path, "--m", "4", "--emit-events")
        doc = json.loads(out)
        assert code == 0
        assert doc["events"][0]["kind"] == "ready"

    def test_comm_costs_flag(self, capsys, tmp_path):
        path = write_graph(tmp_path, DEMO_GRAPH)
        _, out, _ = run_cli(capsys, "simulate", path, "--m", "4", "--comm-costs")
        doc = json.loads(out)
        assert doc["sched_msg_energy_total"] == doc["sched_msg_count"] * 1000.0


class TestValidate:
    def test_ok_graph(self, capsys, tmp_path):
        path = write_graph(tmp_path, DEMO_GRAPH)
        code, out, err = run_cli(capsys, "validate", path)
        assert code == 0
        assert out.startswith("ok: 1 tasks, 0 edges")
        assert err == ""

    def test_crew_violations_listed(self, capsys, tmp_path):
        doc = {
            "tasks": [
                {"id": "w", "kind": "duplicable", "d": 2, "instructions": 10, "writes": ["acc"]},
            ],
            "edges": [],
        }
        path = write_graph(tmp_path, doc)
        code, out, err = run_cli(capsys, "validate", path)
        assert code == 0
        assert "1 CREW violation(s)" in out
        assert "write-write" in err

    def test_cycle_rejected_with_witness(self, capsys, tmp_path):
        doc = {
            "tasks": [
                {"id": "a", "kind": "singular"},
                {"id": "b", "kind": "singular"},
            ],
            "edges": [["a", "b"], ["b", "a"]],
        }
        path = write_graph(tmp_path, doc)
        code, _, err = run_cli(capsys, "validate", path)
        assert code == 2
        assert "a -> b -> a" in err


class TestUsage:
    def test_no_command_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys)
        assert code == 1

    def test_unknown_command_is_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "frobnicate")
        assert code == 1
