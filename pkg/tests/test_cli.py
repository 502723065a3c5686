import csv

import pytest

from qgdprep import cli


def run_cli(args, tmp_path, monkeypatch, capsys=None):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path))
    return cli.main(args)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def read_summary(path):
    out = {}
    for line in path.read_text().splitlines():
        k, v = line.split(" = ", 1)
        out[k] = v
    return out


def test_run_deuteron_writes_outputs(tmp_path, monkeypatch):
    code = run_cli(["run", "--model", "deuteron", "--epsilon", "1e-2", "--seed", "7"], tmp_path, monkeypatch)
    assert code == 0
    rows = read_csv(tmp_path / "trajectory.csv")
    assert rows[0] == list(cli.TRAJECTORY_HEADER)
    summary = read_summary(tmp_path / "summary.txt")
    assert summary["converged"] == "true"
    assert abs(float(summary["final_energy"]) + 1.7485) < 1e-3
    assert len(rows) - 1 == int(summary["steps"]) + 1  # step 0 plus each executed step
    assert read_csv(tmp_path / "vqsp.csv")[0] == ["iteration", "cost"]


def test_run_is_byte_identical(tmp_path, monkeypatch):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["run", "--model", "deuteron", "--seed", "3", "--output", str(d)]) == 0
    for name in ("trajectory.csv", "vqsp.csv", "summary.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_run_flags_rate_outside_interval(tmp_path, monkeypatch, capsys):
    code = run_cli(["run", "--model", "heisenberg2", "--mu", "0.6124", "--ancilla", "exact"], tmp_path, monkeypatch)
    summary = read_summary(tmp_path / "summary.txt")
    assert summary["mu_in_interval"] == "false"
    assert abs(float(summary["interval_upper"]) - 0.5556) < 1e-4
    assert "outside" in capsys.readouterr().out
    assert code == 0


def test_run_noisy_summary(tmp_path, monkeypatch):
    code = run_cli(["run", "--model", "deuteron", "--beta", "0.04", "--ancilla", "exact", "--max-steps", "44"],
                   tmp_path, monkeypatch)
    summary = read_summary(tmp_path / "summary.txt")
    assert code in (0, 3)
    assert 0 < float(summary["relative_energy_error"]) < 1
    assert 0 < float(summary["ground_overlap"]) < 1


def test_nonconvergence_exit_code(tmp_path, monkeypatch):
    code = run_cli(["run", "--model", "deuteron", "--epsilon", "1e-4", "--ancilla", "exact", "--max-steps", "20"],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_NONCONVERGED
    assert (tmp_path / "trajectory.csv").exists()
    assert len(read_csv(tmp_path / "trajectory.csv")) == 22


def test_plot_flag(tmp_path, monkeypatch):
    run_cli(["run", "--model", "deuteron", "--ancilla", "exact", "--plot"], tmp_path, monkeypatch)
    text = (tmp_path / "trajectory.dat").read_text()
    assert text.startswith("# step energy")


@pytest.mark.parametrize("args", [
    ["run", "--model", "nope"],
    ["run", "--model", "deuteron", "--beta", "2"],
    ["run"],
    ["run", "--model", "deuteron", "--mu", "0.1", "--epsilon", "0.01"],
    ["run", "--model", "deuteron", "--mu", "-1"],
    ["run", "--hamiltonian", "/nonexistent/file.txt"],
])
def test_config_errors(args, tmp_path, monkeypatch):
    with pytest.raises(SystemExit) as exc:
        code = run_cli(args, tmp_path, monkeypatch)
        raise SystemExit(code)
    assert exc.value.code == cli.EXIT_CONFIG


def test_config_file_and_flag_precedence(tmp_path, monkeypatch):
    ini = tmp_path / "run.ini"
    ini.write_text("[model]\nname = deuteron\n[qgd]\nepsilon = 1e-1\nancilla_source = exact\n[run]\nseed = 5\n")
    code = run_cli(["run", "--config", str(ini), "--epsilon", "1e-2"], tmp_path, monkeypatch)
    summary = read_summary(tmp_path / "summary.txt")
    assert code == 0 and float(summary["mu"]) == pytest.approx(0.05)
    assert summary["seed"] == "5" and summary["ancilla_source"] == "exact"


def test_config_file_errors(tmp_path, monkeypatch):
    bad = tmp_path / "bad.ini"
    bad.write_text("[qgd]\nepsilon = abc\n")
    assert run_cli(["run", "--config", str(bad), "--model", "deuteron"], tmp_path, monkeypatch) == 2
    bad.write_text("[qgd]\nunknown = 1\n")
    assert run_cli(["run", "--config", str(bad), "--model", "deuteron"], tmp_path, monkeypatch) == 2
    bad.write_text("no section header\n")
    assert run_cli(["run", "--config", str(bad), "--model", "deuteron"], tmp_path, monkeypatch) == 2


def test_hamiltonian_file(tmp_path, monkeypatch, capsys):
    ham = tmp_path / "h.txt"
    ham.write_text("# two spins\n1.0 ZZ\n0.5 XI\n")
    code = run_cli(["run", "--hamiltonian", str(ham), "--mu", "0.1", "--ancilla", "exact"], tmp_path, monkeypatch)
    assert code == 0
    ham.write_text("1.0 ZQ\n")
    assert run_cli(["analyze", "--hamiltonian", str(ham)], tmp_path, monkeypatch) == 2
    assert "line 1" in capsys.readouterr().err


def test_analyze_deuteron(tmp_path, monkeypatch, capsys):
    assert run_cli(["analyze", "--model", "deuteron", "--epsilon", "1e-1"], tmp_path, monkeypatch) == 0
    out = capsys.readouterr().out
    for value in ("1.55293", "0.99990", "2.73581", "3.28885"):
        assert value in out
    assert "dominant index: 3" in out
    assert "T_total" in out


def test_analyze_heisenberg2_and_z(tmp_path, monkeypatch, capsys):
    run_cli(["analyze", "--model", "heisenberg2"], tmp_path, monkeypatch)
    assert "(0, 0.555556)" in capsys.readouterr().out
    ham = tmp_path / "z.txt"
    ham.write_text("1.0 Z\n")
    run_cli(["analyze", "--hamiltonian", str(ham)], tmp_path, monkeypatch)
    assert "(0, inf)" in capsys.readouterr().out


def test_compare_writes_side_by_side(tmp_path, monkeypatch):
    assert run_cli(["compare", "--model", "deuteron", "--ancilla", "exact"], tmp_path, monkeypatch) == 0
    rows = read_csv(tmp_path / "compare.csv")
    assert rows[0] == ["method", "step", "energy", "prob"]
    methods = {r[0] for r in rows[1:]}
    assert methods == {"qgd", "fqe", "vqe"}
    qgd_p = [float(r[3]) for r in rows if r[0] == "qgd"]
    fqe_p = [float(r[3]) for r in rows if r[0] == "fqe"]
    assert all(a >= b for a, b in zip(qgd_p, fqe_p))


def test_table1_rows(tmp_path, monkeypatch):
    code = run_cli(["table1", "--model", "deuteron", "--ancilla", "exact", "--betas", "0", "0.05", "1"],
                   tmp_path, monkeypatch)
    assert code == 0
    rows = read_csv(tmp_path / "table1.csv")
    assert rows[0] == ["beta", "step", "relative_energy_error", "ground_overlap"]
    overlaps = [float(r[3]) for r in rows[1:]]
    assert overlaps[0] > overlaps[1] > overlaps[2]
    assert overlaps[2] == pytest.approx(0.25)


def test_vqsp_train_command(tmp_path, monkeypatch):
    assert run_cli(["vqsp-train", "--model", "deuteron"], tmp_path, monkeypatch) == 0
    summary = read_summary(tmp_path / "summary.txt")
    assert float(summary["final_cost"]) <= 1e-9
    assert len(read_csv(tmp_path / "theta.csv")) == 10
    assert run_cli(["vqsp-train", "--model", "deuteron", "--max-evals", "50", "--restarts", "1"],
                   tmp_path, monkeypatch) == cli.EXIT_NONCONVERGED


def test_default_output_env(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(cli.OUTPUT_ENV, raising=False)
    assert cli.main(["run", "--model", "deuteron", "--ancilla", "exact"]) == 0
    assert (tmp_path / cli.DEFAULT_OUTPUT / "trajectory.csv").exists()
