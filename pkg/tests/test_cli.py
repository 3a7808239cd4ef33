"""
End-to-end tests of the command-line interface.
"""

from pathlib import Path

import numpy as np
import pytest
import yaml

from qexciton import qalgebra
from qexciton.cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION_FAILED, build_parser, main

MICROCAVITY = {"omega": "1.75eV", "omega_ex": "1.75eV", "g": "200ueV", "gamma_ex": "20ueV", "gamma_ph": "40ueV",
               "alpha_sq": 9, "n": 1}


def run(*argv) -> int:
    with pytest.raises(SystemExit) as exc:
        main([str(a) for a in argv])
    return exc.value.code


def write_config(path: Path, scenarios: list[dict]) -> Path:
    path.write_text(yaml.safe_dump({
        "defaults": {"grid": {"start": "1.7485eV", "stop": "1.7515eV", "points": 301}},
        "scenarios": scenarios,
    }))
    return path


def read_csv(path: Path) -> tuple[str, np.ndarray]:
    header = path.read_text().splitlines()[0]
    return header, np.loadtxt(path, delimiter=",", skiprows=1)


@pytest.fixture
def config_file(tmp_path) -> Path:
    return write_config(tmp_path / "scenarios.yaml", [
        {"name": "cavity", "kind": "single", "params": {**MICROCAVITY, "q": 1.01}},
        {"name": "excitons", "kind": "two_mode", "params": {
            "omega": 1.75, "omega_ex1": 1.75, "omega_ex2": 1.77, "g": 2e-4, "gamma_ex1": 2e-4,
            "gamma_ex2": 2e-4, "gamma_ph": 4.5e-5, "q1": 1.04, "q2": 1.04, "n1": 1, "n2": 1, "alpha_sq": 9,
        }},
    ])


class TestRun:

    def test_runs_every_scenario(self, config_file, tmp_path, capsys):
        out = tmp_path / "out"
        assert run("-c", config_file, "--out", out) == EXIT_OK
        header, data = read_csv(out / "cavity.csv")
        assert header == "omega_eV,S"
        assert data.shape == (301, 2)
        assert (out / "excitons.csv").exists()
        assert "wrote" in capsys.readouterr().out

    def test_spectrum_filters_by_model(self, config_file, tmp_path):
        out = tmp_path / "out"
        assert run("-c", config_file, "--out", out, "spectrum", "two-mode") == EXIT_OK
        assert sorted(p.name for p in out.iterdir()) == ["excitons.csv"]

    def test_absorb_without_scenarios(self, config_file, tmp_path):
        assert run("-c", config_file, "--out", tmp_path / "out", "absorb", "third") == EXIT_INVALID

    def test_svg_output(self, config_file, tmp_path):
        out = tmp_path / "out"
        assert run("-c", config_file, "--out", out, "--svg", "spectrum", "single") == EXIT_OK
        svg = (out / "cavity.svg").read_text()
        assert svg.lstrip().startswith("<?xml")
        assert "<svg" in svg

    def test_missing_config(self, tmp_path):
        assert run("-c", tmp_path / "absent.yaml", "--out", tmp_path / "out") == EXIT_INVALID

    def test_malformed_config(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("scenarios:\n  - kind: single\n    params: {omega: fast}\n")
        assert run("-c", path, "--out", tmp_path / "out") == EXIT_INVALID

    def test_exceptional_point(self, tmp_path):
        path = write_config(tmp_path / "ep.yaml", [{"kind": "single", "params": {
            "omega": 1.75, "omega_ex": 1.75, "g": "10ueV", "gamma_ex": "40ueV", "gamma_ph": "20ueV", "alpha_sq": 1,
        }}])
        assert run("-c", path, "--out", tmp_path / "out") == EXIT_NUMERICAL

    def test_zero_linewidth(self, tmp_path):
        path = write_config(tmp_path / "sharp.yaml", [{"kind": "single", "params": {
            "omega": 1.75, "omega_ex": 1.75, "g": "200ueV", "alpha_sq": 1,
        }}])
        assert run("-c", path, "--out", tmp_path / "out") == EXIT_INVALID


class TestPreset:

    def test_fig1(self, tmp_path):
        out = tmp_path / "fig1"
        assert run("--out", out, "preset", "fig1") == EXIT_OK
        files = sorted(out.glob("*.csv"))
        assert [f.name for f in files] == ["fig1_q1.000.csv", "fig1_q1.010.csv", "fig1_q1.015.csv"]
        header, data = read_csv(files[0])
        assert header == "omega_eV,S"
        assert data.shape == (12001, 2)
        assert data[0, 0] == 1.7485
        assert data[-1, 0] == 1.7515

    def test_concurrency_does_not_change_output(self, tmp_path):
        serial, parallel = tmp_path / "serial", tmp_path / "parallel"
        assert run("--out", serial, "--jobs", 1, "preset", "fig4") == EXIT_OK
        assert run("--out", parallel, "--jobs", 3, "preset", "fig4") == EXIT_OK
        names = sorted(p.name for p in serial.iterdir())
        assert names == sorted(p.name for p in parallel.iterdir())
        assert len(names) == 3
        for name in names:
            assert (serial / name).read_bytes() == (parallel / name).read_bytes()

    def test_seed_only_affects_validation(self, tmp_path):
        first, second = tmp_path / "first", tmp_path / "second"
        assert run("--out", first, "--seed", 0, "preset", "fig1") == EXIT_OK
        assert run("--out", second, "--seed", 7, "preset", "fig1") == EXIT_OK
        for path in sorted(first.glob("*.csv")):
            assert path.read_bytes() == (second / path.name).read_bytes()

    def test_unknown_preset(self, tmp_path):
        assert run("--out", tmp_path, "preset", "fig9") == EXIT_INVALID

    def test_invalid_jobs(self, tmp_path):
        assert run("--out", tmp_path, "--jobs", 0, "preset", "fig1") == EXIT_INVALID

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["fig2", "fig3", "fig5", "fig6"])
    def test_other_figures(self, tmp_path, name):
        assert run("--out", tmp_path, "preset", name) == EXIT_OK
        assert list(tmp_path.glob(f"{name}_*.csv"))


class TestValidate:

    def test_passes(self, tmp_path, capsys):
        assert run("--out", tmp_path, "validate", "--draws", 20) == EXIT_OK
        report = (tmp_path / "validate_report.txt").read_text()
        assert report.splitlines()[-1] == "result: pass"
        assert "result: pass" in capsys.readouterr().out

    def test_custom_report_name(self, tmp_path):
        assert run("--out", tmp_path, "--seed", 4, "validate", "--draws", 5, "--report", "sweep.txt") == EXIT_OK
        assert (tmp_path / "sweep.txt").read_text().startswith("seed: 4\ndraws: 5\n")

    def test_faulty_commutator_fails(self, tmp_path, monkeypatch):
        exact = qalgebra.k_factor
        monkeypatch.setattr(qalgebra, "k_factor", lambda q, n: exact(q, n) * (1 + 1e-6))
        assert run("--out", tmp_path, "validate", "--draws", 20) == EXIT_VALIDATION_FAILED
        assert "result: fail" in (tmp_path / "validate_report.txt").read_text()

    def test_empty_sweep(self, tmp_path):
        assert run("--out", tmp_path, "validate", "--draws", 0) == EXIT_INVALID


def test_parser_defaults():
    args = build_parser().parse_args(["preset", "fig1"])
    assert args.config == "config.yaml"
    assert args.out == "out"
    assert args.jobs == 1
    assert args.seed == 0
    assert not args.svg
