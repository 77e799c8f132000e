import json

import pytest

from persets import cli, metric


def run(argv):
    return cli.main(argv)


def test_validate_good_matrix(tmp_path, capsys):
    path = tmp_path / "ok.csv"
    metric.write_matrix_csv(metric.validate([[0, 1], [1, 0]]), path)
    assert run(["validate", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["valid"] and out["diameter"] == 1.0


def test_validate_bad_matrix_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("0,3\n1,0\n")
    assert run(["validate", str(path)]) == 1
    out = json.loads(capsys.readouterr().out)
    assert not out["valid"]
    assert any(v[0] == "asymmetry" for v in out["violations"])


def test_sample_campaign_files_and_determinism(tmp_path, capsys):
    args = [
        "sample", "--space", "s1", "--n", "4", "--k", "1",
        "--tuples", "20000", "--seed", "7",
        "--out", str(tmp_path / "a.csv"),
        "--svg", str(tmp_path / "a.svg"),
        "--heatmap", str(tmp_path / "a-heat.svg"),
    ]
    assert run(args) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["tuples"] == 20000
    assert abs(summary["nontrivial_fraction"] - 1 / 9) < 0.02
    args2 = list(args)
    args2[args.index(str(tmp_path / "a.csv"))] = str(tmp_path / "b.csv")
    assert run(args2) == 0
    capsys.readouterr()
    assert (tmp_path / "a.csv").read_text() == (tmp_path / "b.csv").read_text()
    a_json = json.loads((tmp_path / "a.csv.json").read_text())
    assert a_json["space"] == "s1" and a_json["seed"] == 7
    assert (tmp_path / "a.svg").read_text().startswith("<svg")
    assert (tmp_path / "a-heat.svg").read_text().count("<rect") > 5


def test_oracle_check_on_circle_sample(tmp_path, capsys):
    csv = tmp_path / "s.csv"
    assert run(["sample", "--space", "s1", "--tuples", "20000", "--seed", "3",
                "--out", str(csv)]) == 0
    capsys.readouterr()
    assert run(["oracle-check", "--region", "s1", "--check", str(csv),
                "--out", str(tmp_path / "flags.csv")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["violations"] == 0
    header = (tmp_path / "flags.csv").read_text().splitlines()[0]
    assert header == "t_b,t_d,inside"


def test_oracle_check_catches_outside_points(tmp_path, capsys):
    csv = tmp_path / "s.csv"
    csv.write_text("t_b,t_d\n0.1,3.0\n")
    assert run(["oracle-check", "--region", "s1", "--check", str(csv)]) == 1
    assert json.loads(capsys.readouterr().out)["violations"] == 1


def test_compare_regions(capsys):
    assert run(["compare", "--region-a", "s1", "--region-b", "s2-geodesic",
                "--step", "0.005", "--interior-step", "0.02"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["gh_lower_bound"] == pytest.approx(0.2147, abs=0.01)


def test_compare_samples(tmp_path, capsys):
    for name, seed in [("a", 1), ("b", 2)]:
        assert run(["sample", "--space", "s1", "--tuples", "30000", "--seed",
                    str(seed), "--out", str(tmp_path / f"{name}.csv")]) == 0
    capsys.readouterr()
    assert run(["compare", "--a", str(tmp_path / "a.csv"), "--b", str(tmp_path / "b.csv")]) == 0
    out = json.loads(capsys.readouterr().out)
    # same space, dense samples: tiny Hausdorff gap
    assert out["hausdorff_bottleneck"] < 0.1
    assert out["gh_lower_bound"] == out["hausdorff_bottleneck"] / 2.0


def test_compare_usage_error(capsys):
    assert run(["compare", "--a", "only-one.csv"]) == 2


def test_graph_betti(capsys):
    assert run(["graph-betti", "--graph", "glued:3.5,4.5:alpha=0.5",
                "--tuples", "50000", "--seed", "5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["betti"] == 2
    lengths = sorted(c["length"] for c in out["cycles"])
    assert lengths[0] == pytest.approx(3.5, rel=0.02)
    assert lengths[1] == pytest.approx(4.5, rel=0.02)


def test_density_check(capsys):
    assert run(["density-check", "--tuples", "150000", "--seed", "11"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["l1_error"] < 0.05
    assert out["analytic_mass"] == pytest.approx(1 / 9, abs=1e-6)


def test_help_on_every_subcommand(capsys):
    for sub in ["sample", "oracle-check", "compare", "graph-betti", "density-check", "validate"]:
        with pytest.raises(SystemExit) as exc:
            cli.build_parser().parse_args([sub, "--help"])
        assert exc.value.code == 0
        assert "--" in capsys.readouterr().out or sub == "validate"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.build_parser().parse_args(["sample"])  # missing required source
    assert exc.value.code == 2


def test_missing_file_is_error(capsys):
    assert run(["validate", "no-such-file.csv"]) == 1


def test_workers_env_default(monkeypatch):
    from persets import engine

    monkeypatch.setenv("PERSETS_WORKERS", "6")
    assert engine.default_workers() == 6
    monkeypatch.delenv("PERSETS_WORKERS")
    assert engine.default_workers() == 1


def test_console_script_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "persets.cli", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "sample" in proc.stdout and "graph-betti" in proc.stdout


def test_engine_accepts_string_descriptors():
    from persets import engine

    s = engine.sample_persistence_set("s1", 4, 1, 2000, seed=1)
    assert s.space == "s1"
    g = engine.sample_persistence_set("wedge:3.2,4.0", 4, 1, 2000, seed=1)
    assert g.space.startswith("graph:")
