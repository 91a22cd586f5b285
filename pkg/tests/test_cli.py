import re

import pytest

from qst_toolkit.cli import main

HEADER = re.compile(r"^# qst-toolkit v0\.1\.0 seed=-?\d+ dim=\d+$")

FAST_ARGS = {
    "sigma-check": ["--samples", "25", "--seed", "1"],
    "spectrum": ["--dim", "8", "--k", "3"],
    "distance": ["--dim", "4", "--k", "2"],
    "uncertainty": ["--dim", "6", "--samples", "100", "--seed", "3"],
    "weyl-check": ["--dim", "16"],
    "kernel": ["--n", "2", "--kmax", "4"],
    "commutator": [],
}


def read_lines(path):
    return path.read_text().splitlines()


@pytest.mark.parametrize("command", sorted(FAST_ARGS))
def test_subcommand_writes_wellformed_csv(command, tmp_path, capsys):
    out = tmp_path / f"{command}.csv"
    rc = main([command, *FAST_ARGS[command], "--out", str(out)])
    assert rc == 0
    assert capsys.readouterr().out.strip() == str(out)
    lines = read_lines(out)
    assert HEADER.match(lines[0]), lines[0]
    assert lines[1].startswith("# columns: ")
    data = [ln for ln in lines[2:] if not ln.startswith("#")]
    assert data, "no data rows written"
    n_cols = len(lines[1].removeprefix("# columns: ").split(","))
    assert all(len(ln.split(",")) == n_cols for ln in data)


def test_unknown_subcommand_exits_1(capsys):
    assert main(["frobnicate"]) == 1
    assert "unknown subcommand" in capsys.readouterr().err


def test_missing_subcommand_exits_2(capsys):
    assert main([]) == 2
    assert "subcommand is required" in capsys.readouterr().err


def test_validation_failure_exits_2(tmp_path, capsys):
    out = str(tmp_path / "x.csv")
    assert main(["spectrum", "--dim", "1", "--out", out]) == 2
    assert main(["spectrum", "--dim", "8", "--method", "psychic", "--out", out]) == 2
    assert main(["distance", "--dim", "40", "--method", "brute_force",
                 "--out", out]) == 2
    capsys.readouterr()


def test_underresolved_quadrature_exits_3(tmp_path, capsys):
    out = str(tmp_path / "c.csv")
    assert main(["commutator", "--kmax", "120", "--out", out]) == 3
    assert "numerical quality" in capsys.readouterr().err


def test_reruns_are_byte_identical(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["uncertainty", "--dim", "6", "--samples", "200", "--seed", "5"]
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_output(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(["uncertainty", "--dim", "6", "--samples", "200",
                 "--seed", "5", "--out", str(a)]) == 0
    assert main(["uncertainty", "--dim", "6", "--samples", "200",
                 "--seed", "6", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() != b.read_bytes()


def test_config_file_fills_defaults_and_flags_win(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dim = 6\nk = 2\n")
    out = tmp_path / "s.csv"

    assert main(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    assert "dim=6" in read_lines(out)[0]
    data = [ln for ln in read_lines(out)[2:] if not ln.startswith("#")]
    assert len(data) == 2  # k from the config file

    assert main(["spectrum", "--config", str(cfg), "--dim", "8",
                 "--out", str(out)]) == 0
    assert "dim=8" in read_lines(out)[0]  # the explicit flag wins
    capsys.readouterr()


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dim=6\nwibble=3\n")
    assert main(["spectrum", "--config", str(cfg),
                 "--out", str(tmp_path / "s.csv")]) == 2
    assert "wibble" in capsys.readouterr().err


def test_malformed_config_line_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("dim 6\n")
    assert main(["spectrum", "--config", str(cfg),
                 "--out", str(tmp_path / "s.csv")]) == 2
    capsys.readouterr()


def test_out_dir_env_redirects_relative_paths(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QST_OUT_DIR", str(tmp_path))
    assert main(["spectrum", "--dim", "6", "--k", "2"]) == 0
    printed = capsys.readouterr().out.strip()
    assert printed == str(tmp_path / "spectrum.csv")
    assert (tmp_path / "spectrum.csv").exists()


def test_out_dir_env_ignored_for_absolute_paths(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QST_OUT_DIR", str(tmp_path / "elsewhere"))
    out = tmp_path / "direct.csv"
    assert main(["spectrum", "--dim", "6", "--k", "2", "--out", str(out)]) == 0
    capsys.readouterr()
    assert out.exists()
    assert not (tmp_path / "elsewhere").exists()


def test_kernel_points_batch_mode(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    pts.write_text(
        "# flattened pairs of 4-vectors\n"
        "0.5,0,0,0,-0.5,0,0,0\n"
        "0.1,0.2,0.3,0.4,-0.1,-0.2,-0.3,-0.4\n"
    )
    out = tmp_path / "k.csv"
    assert main(["kernel", "--n", "2", "--points", str(pts),
                 "--out", str(out)]) == 0
    capsys.readouterr()
    lines = read_lines(out)
    assert "density" in lines[1]
    data = [ln for ln in lines[2:] if not ln.startswith("#")]
    assert len(data) == 2


def test_kernel_points_off_surface_exits_2(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    pts.write_text("1,0,0,0,0,0,0,0\n")
    assert main(["kernel", "--n", "2", "--points", str(pts),
                 "--out", str(tmp_path / "k.csv")]) == 2
    capsys.readouterr()


def test_kernel_points_wrong_arity_exits_2(tmp_path, capsys):
    pts = tmp_path / "pts.csv"
    pts.write_text("1,0,0,0,-1,0\n")
    assert main(["kernel", "--n", "2", "--points", str(pts),
                 "--out", str(tmp_path / "k.csv")]) == 2
    assert "expected 8 values" in capsys.readouterr().err


def test_help_exits_0(capsys):
    assert main(["spectrum", "--help"]) == 0
    assert "--dim" in capsys.readouterr().out


def test_weyl_check_reports_ladder_rungs(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["weyl-check", "--dim", "16", "--out", str(out)]) == 0
    capsys.readouterr()
    lines = read_lines(out)
    data = [ln for ln in lines[2:] if not ln.startswith("#")]
    dims = [int(ln.split(",")[0]) for ln in data]
    assert dims == [8, 16]
    residuals = [float(ln.split(",")[1]) for ln in data]
    assert residuals[1] < residuals[0]
    assert any(ln.startswith("# alpha=") for ln in lines)
    assert any(ln.startswith("# beta=") for ln in lines)


def test_weyl_check_below_ladder_exits_2(tmp_path, capsys):
    assert main(["weyl-check", "--dim", "4",
                 "--out", str(tmp_path / "w.csv")]) == 2
    capsys.readouterr()
