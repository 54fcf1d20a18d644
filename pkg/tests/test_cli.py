import json

import pytest

from netattack import (
    BaParams,
    CrashCriterion,
    StrategySpec,
    generate_ba,
    load_edge_list,
    run_attack,
    write_trace_csv,
)
from netattack.cli import main
from netattack.experiment import CadencePolicy


def write_config(path, **data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestGenerate:
    def test_writes_loadable_graph(self, tmp_path, capsys):
        out = tmp_path / "net.txt"
        rc = main(["generate", "--n", "120", "--m", "2", "--seed", "3", "--out", str(out)])
        assert rc == 0
        assert "120 nodes, 237 edges" in capsys.readouterr().out
        g, labels = load_edge_list(out)
        reference = generate_ba(BaParams(120, 2, seed=3))
        assert g.adjacency == reference.adjacency
        assert labels == [str(v) for v in range(120)]

    def test_bad_params_exit_1(self, tmp_path, capsys):
        rc = main(["generate", "--n", "2", "--m", "2", "--out", str(tmp_path / "x.txt")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestAttack:
    def test_generated_file_attacks_like_the_original(self, tmp_path, capsys):
        net = tmp_path / "net.txt"
        assert main(["generate", "--n", "150", "--m", "2", "--seed", "4", "--out", str(net)]) == 0
        cfg = write_config(
            tmp_path / "cfg.json",
            network={"edge_list": "net.txt"},
            strategies=[{"kind": "coordinated", "seed": 2}],
            base_seed=11,
            budget=0.6,
            snapshot_cadence={"s_every": 5, "d_every": None},
        )
        trace_path = tmp_path / "trace.csv"
        rc = main(["attack", "--config", cfg, "--out", str(trace_path)])
        assert rc == 0
        assert "coordinated: removed" in capsys.readouterr().out

        # the same attack driven in-process on the pristine generator output
        g = generate_ba(BaParams(150, 2, seed=4))
        spec = StrategySpec("coordinated", seed=2).with_seed(13)
        trace = run_attack(
            g,
            spec,
            budget=0.6,
            cadence=CadencePolicy(s_every=5, d_enabled=False).resolve(150),
            criterion=CrashCriterion(0.01),
        )
        expect = tmp_path / "expect.csv"
        write_trace_csv(expect, trace)
        assert trace_path.read_bytes() == expect.read_bytes()

    def test_default_output_needs_output_dir(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "cfg.json",
            network={"ba": {"n": 50, "m": 2}},
            strategies=[{"kind": "intentional"}],
        )
        rc = main(["attack", "--config", cfg])
        assert rc == 1
        assert "no trace output path" in capsys.readouterr().err

    def test_seed_and_epsilon_overrides(self, tmp_path):
        cfg = write_config(
            tmp_path / "cfg.json",
            network={"ba": {"n": 80, "m": 2}},
            strategies=[{"kind": "random_failure"}],
            snapshot_cadence={"s_every": 4, "d_every": None},
        )
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["attack", "--config", cfg, "--out", str(a), "--seed", "21"]) == 0
        assert main(["attack", "--config", cfg, "--out", str(b), "--seed", "22"]) == 0
        assert a.read_bytes() != b.read_bytes()


class TestSweepAndReport:
    @pytest.fixture()
    def swept(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "cfg.json",
            network={"ba": {"n": 120, "m": 2}},
            strategies=[{"kind": "intentional"}, {"kind": "greedy_sequential"}],
            trials=2,
            base_seed=3,
            budget=0.8,
            snapshot_cadence={"s_every": 6, "d_every": 24},
            output_dir=str(tmp_path / "out"),
        )
        rc = main(["sweep", "--config", cfg, "--threads", "2"])
        assert rc == 0
        assert "intentional: crash threshold mean=" in capsys.readouterr().out
        return tmp_path

    def test_sweep_outputs(self, swept):
        out = swept / "out"
        for name in (
            "intentional.curve.csv",
            "greedy_sequential.curve.csv",
            "thresholds.csv",
            "manifest.json",
        ):
            assert (out / name).is_file()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["threads"] == 2
        assert len(manifest["trials"]) == 4

    def test_report_builds_svg(self, swept, capsys):
        out = swept / "out"
        svg = swept / "chart.svg"
        rc = main(
            [
                "report",
                str(out / "intentional.curve.csv"),
                str(out / "greedy_sequential.curve.csv"),
                "--out",
                str(svg),
            ]
        )
        assert rc == 0
        content = svg.read_text()
        assert content.startswith("<svg")
        assert "intentional" in content and "greedy_sequential" in content
        rc = main(["report", str(out / "intentional.curve.csv"), "--out", str(svg), "--column", "d"])
        assert rc == 0

    def test_report_without_requested_column(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "cfg.json",
            network={"ba": {"n": 60, "m": 2}},
            strategies=[{"kind": "intentional"}],
            snapshot_cadence={"s_every": 5, "d_every": None},
            output_dir=str(tmp_path / "out"),
        )
        assert main(["sweep", "--config", cfg]) == 0
        rc = main(
            ["report", str(tmp_path / "out" / "intentional.curve.csv"),
             "--out", str(tmp_path / "x.svg"), "--column", "d"]
        )
        assert rc == 1
        assert "no d data" in capsys.readouterr().err


class TestErrorPaths:
    def test_missing_config_exit_1(self, tmp_path, capsys):
        rc = main(["sweep", "--config", str(tmp_path / "gone.json")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_invalid_json_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        rc = main(["attack", "--config", str(bad), "--out", str(tmp_path / "t.csv")])
        assert rc == 1
        assert "not valid JSON" in capsys.readouterr().err

    def test_bad_thread_count_exit_1(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "cfg.json",
            network={"ba": {"n": 50, "m": 2}},
            strategies=[{"kind": "intentional"}],
            output_dir=str(tmp_path / "out"),
        )
        rc = main(["sweep", "--config", cfg, "--threads", "0"])
        assert rc == 1

    def test_unexpected_failures_exit_2(self, tmp_path, capsys):
        rc = main(["report", str(tmp_path), "--out", str(tmp_path / "x.svg")])
        assert rc == 2
        assert "runtime error:" in capsys.readouterr().err

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("netattack ")
