import json
from fractions import Fraction

import pytest

import rma_tse.acc
from rma_tse.acc import IotseTable, acc_iotse_table
from rma_tse.asymptotic import SplitPolicy
from rma_tse.cli import (
    SweepRow,
    emit_sweep_csv,
    emit_table_json,
    parse_table_json,
    preset_sweeps,
    run,
)
from rma_tse.ensemble import EnsembleConfig, ensemble_table


class TestBasicCommands:
    def test_acc_prints_count(self, capsys):
        assert run(["acc", "--N", "3", "--ai", "2", "--ao", "1", "--b", "0"]) == 0
        assert capsys.readouterr().out.strip() == "2"

    def test_ensemble_infeasible_class_prints_zero(self, capsys):
        assert run(["ensemble", "--q", "2", "--K", "2", "--L", "1", "--a", "1", "--b", "1"]) == 0
        assert capsys.readouterr().out.strip() == "0"

    def test_ensemble_fraction_output(self, capsys):
        assert run(["ensemble", "--q", "2", "--K", "2", "--L", "2", "--a", "1", "--b", "2"]) == 0
        out = capsys.readouterr().out.strip()
        assert Fraction(out) == ensemble_table(EnsembleConfig(2, 2, 2))[(1, 2)]

    def test_usage_error_missing_flag(self, capsys):
        assert run(["acc", "--N", "3"]) == 1

    def test_usage_error_range(self, capsys):
        assert run(["acc", "--N", "3", "--ai", "9", "--ao", "0", "--b", "0"]) == 1

    def test_unknown_subcommand(self):
        assert run(["frobnicate"]) == 1

    def test_help_exits_zero(self):
        assert run(["--help"]) == 0


class TestAsymCommands:
    def test_asym_point_output(self, capsys):
        code = run([
            "asym-point", "--q", "3", "--L", "2", "--alpha", "0.05", "--beta", "0.005",
            "--split", "fixed:0.5,0.5", "--grid-points", "9",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("r=")
        assert "level2:" in out

    def test_asym_point_infeasible_exit_2(self, capsys):
        code = run([
            "asym-point", "--q", "2", "--L", "2", "--alpha", "0.1", "--beta", "3.0",
            "--grid-points", "5",
        ])
        assert code == 2

    def test_bad_split(self):
        code = run([
            "asym-point", "--q", "2", "--L", "2", "--alpha", "0.1", "--beta", "0.01",
            "--split", "fixed:0.9",
        ])
        assert code == 1


class TestSweepCsv:
    ARGS = [
        "asym-sweep", "--q", "3", "--L", "2", "--delta", "0.1",
        "--alpha-min", "0.05", "--alpha-max", "0.1", "--alpha-steps", "2",
        "--split", "fixed:0.5,0.5", "--grid-points", "7",
    ]

    def test_csv_layout_and_determinism(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert run(self.ARGS + ["--out", str(out1)]) == 0
        assert run(self.ARGS + ["--out", str(out2)]) == 0
        data1 = out1.read_bytes()
        assert data1 == out2.read_bytes()
        lines = data1.decode().splitlines()
        assert lines[0].startswith("# q=3 L=2 delta=0.1 split=fixed:0.5,0.5 grid=7")
        header = lines[1].split(",")
        assert header[:5] == ["alpha", "beta", "r", "r_clamped", "omega"]
        assert len(header) == 5 + 4 * 2
        assert len(lines) == 2 + 2
        for line in lines[2:]:
            assert len(line.split(",")) == 5 + 4 * 2

    def test_empty_rows_metadata_and_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        emit_sweep_csv(
            [], out, q=3, L=2, delta=0.1, split=SplitPolicy.free(), grid=33
        )
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("#")

    def test_workers_do_not_change_bytes(self, tmp_path, monkeypatch):
        seq = tmp_path / "seq.csv"
        par = tmp_path / "par.csv"
        assert run(self.ARGS + ["--out", str(seq)]) == 0
        monkeypatch.setenv("TSE_THREADS", "2")
        assert run(self.ARGS + ["--out", str(par)]) == 0
        assert seq.read_bytes() == par.read_bytes()

    def test_r_clamped_column(self, tmp_path):
        rows = [SweepRow(0.01, 0.0, -0.5, 0.0, 0.0, (((0.0), 0.0, 0.0, 0.0),) * 2)]
        out = tmp_path / "c.csv"
        emit_sweep_csv(rows, out, q=3, L=2, delta=0.0, split=SplitPolicy.free(), grid=33)
        row = out.read_text().splitlines()[2].split(",")
        assert row[2] == "-0.5" and row[3] == "0"

    def test_infeasible_rows_do_not_abort(self, tmp_path):
        out = tmp_path / "inf.csv"
        code = run([
            "asym-sweep", "--q", "3", "--L", "2", "--delta", "50",
            "--alpha-min", "0.02", "--alpha-max", "0.05", "--alpha-steps", "2",
            "--grid-points", "5", "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 4
        for line in lines[2:]:
            cells = line.split(",")
            assert cells[2] == "-inf" and cells[3] == "0"


class TestTableJson:
    def test_iotse_n1(self, tmp_path):
        out = tmp_path / "t.json"
        assert run(["acc-table", "--N", "1", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["kind"] == "iotse"
        assert payload["entries"] == [
            {"key": [0, 0, 0], "value": "1"},
            {"key": [1, 0, 1], "value": "1"},
        ]

    def test_ensemble_contains_spot_value(self, tmp_path):
        out = tmp_path / "e.json"
        assert run(["ensemble-table", "--q", "2", "--K", "2", "--L", "1", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["kind"] == "ensemble_tse"
        assert {"key": [1, 2], "value": "5"} in payload["entries"]

    def test_empty_table(self, tmp_path):
        out = tmp_path / "z.json"
        emit_table_json("iotse", {"N": 0}, {}, out)
        assert json.loads(out.read_text())["entries"] == []

    def test_round_trip_iotse(self, tmp_path):
        table = acc_iotse_table(4)
        out = tmp_path / "r.json"
        emit_table_json("iotse", {"N": 4, "mode": "exact"}, table.entries, out)
        kind, params, entries = parse_table_json(out.read_text())
        assert kind == "iotse" and params["N"] == 4
        assert entries == table.entries

    def test_round_trip_ensemble_fractions(self, tmp_path):
        table = ensemble_table(EnsembleConfig(2, 2, 2))
        out = tmp_path / "f.json"
        emit_table_json("ensemble_tse", {"q": 2}, table, out)
        _, _, entries = parse_table_json(out.read_text())
        assert entries == table

    def test_entries_sorted(self, tmp_path):
        out = tmp_path / "s.json"
        assert run(["acc-table", "--N", "5", "--out", str(out)]) == 0
        keys = [tuple(e["key"]) for e in json.loads(out.read_text())["entries"]]
        assert keys == sorted(keys)

    def test_log_table_round_trip(self, tmp_path):
        out = tmp_path / "log.json"
        assert run(["acc-table", "--N", "6", "--mode", "log", "--out", str(out)]) == 0
        kind, params, entries = parse_table_json(out.read_text())
        assert kind == "iotse" and params["mode"] == "log"
        assert entries == acc_iotse_table(6, "log").entries


class TestOracleCommand:
    def test_trellis(self, capsys):
        assert run(["oracle", "--which", "trellis", "--N", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["params"]["method"] == "trellis"
        assert len(payload["entries"]) == 2

    def test_graph(self, capsys):
        assert run(["oracle", "--which", "graph", "--q", "2", "--K", "2", "--L", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert {"key": [1, 2], "value": "5"} in payload["entries"]

    def test_missing_params(self):
        assert run(["oracle", "--which", "graph"]) == 1


class TestVerifyCommand:
    def test_quick_clean(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        assert run(["verify", "--quick", "--out", str(out)]) == 0
        assert "OK closed_form_vs_trellis" in capsys.readouterr().out
        assert json.loads(out.read_text())["mismatch_count"] == 0

    def test_mismatch_exit_3(self, capsys, monkeypatch):
        real = rma_tse.acc.acc_iotse_table

        def faulty(n, mode="exact"):
            table = real(n, mode)
            if n == 2:
                entries = dict(table.entries)
                entries[(0, 0, 0)] = 7
                return IotseTable(N=n, mode=mode, entries=entries)
            return table

        monkeypatch.setattr(rma_tse.acc, "acc_iotse_table", faulty)
        assert run(["verify", "--quick"]) == 3
        assert "MISMATCH" in capsys.readouterr().out


class TestConfigFile:
    def test_config_supplies_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "tse.conf"
        cfg.write_text("mode=log\n# comment line\n")
        assert run(["acc", "--config", str(cfg), "--N", "5", "--ai", "1", "--ao", "0", "--b", "1"]) == 0
        out = capsys.readouterr().out.strip()
        assert float(out) == pytest.approx(1.6094379124341003)  # ln 5

    def test_command_line_wins(self, tmp_path, capsys):
        cfg = tmp_path / "tse.conf"
        cfg.write_text("mode=log\n")
        assert run([
            "acc", "--config", str(cfg), "--N", "5", "--ai", "1", "--ao", "0", "--b", "1",
            "--mode", "exact",
        ]) == 0
        assert capsys.readouterr().out.strip() == "5"

    def test_missing_config(self):
        assert run(["acc", "--config", "/nonexistent", "--N", "1", "--ai", "0", "--ao", "0", "--b", "0"]) == 1


class TestPresets:
    def test_preset_structure(self):
        fig4 = preset_sweeps("fig4")
        assert len(fig4) == 4
        deltas = [spec.delta for spec, _ in fig4]
        assert deltas == [0.0, 0.05, 0.1, 0.2]
        assert all(spec.split.fractions == (0.5, 0.5) for spec, _ in fig4)
        assert all(spec.q == 3 and spec.L == 2 for spec, _ in fig4)

        fig5 = preset_sweeps("fig5")
        assert [spec.split.fractions[0] for spec, _ in fig5] == [0.0, 0.25, 0.5, 0.75, 1.0]

        fig6 = preset_sweeps("fig6")
        assert [spec.q for spec, _ in fig6] == [2, 3, 4, 5]

        fig7 = preset_sweeps("fig7")
        assert [spec.L for spec, _ in fig7] == [2, 3, 4]
        for spec, name in fig7:
            assert spec.split.fractions[0] == 1.0
            assert name.endswith(".csv")
