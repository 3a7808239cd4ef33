"""
Tests for scenario file parsing and the figure presets.
"""

from pathlib import Path

import pytest
import yaml

from qexciton.config import (
    ScenarioConfig,
    dump_scenarios,
    expand_env_vars,
    load_scenarios,
    parse_document,
    parse_energy,
    parse_scenario,
    serialize_scenario,
)
from qexciton.errors import ConfigError
from qexciton.presets import PRESETS, preset
from qexciton.spectrum import EnergyGrid

REPO_CONFIG = Path(__file__).resolve().parent.parent / "config.yaml"

GRID = {"start": 1.7485, "stop": 1.7515, "points": 11}


def single(**params) -> dict:
    return {
        "kind": "single",
        "params": {"omega": 1.75, "omega_ex": 1.75, "g": "200ueV", **params},
        "grid": GRID,
    }


class TestEnergies:

    @pytest.mark.parametrize("text, expected", [
        ("200ueV", 200e-6),
        ("200 µeV", 200e-6),
        ("1574 meV", 1.574),
        ("1.75eV", 1.75),
        ("1.75", 1.75),
        ("2e-4", 2e-4),
        (1.5, 1.5),
    ])
    def test_parse(self, text, expected):
        assert parse_energy(text) == pytest.approx(expected, rel=1e-15)

    def test_bare_numbers_use_scenario_units(self):
        assert parse_energy(1750, "meV") == pytest.approx(1.75, rel=1e-15)
        assert parse_energy("45", "ueV") == pytest.approx(45e-6, rel=1e-15)

    def test_suffix_wins_over_units(self):
        assert parse_energy("1.75 eV", "meV") == 1.75

    @pytest.mark.parametrize("value", ["abc", "5 keV", True, None, "nan", [1.0]])
    def test_rejects_invalid(self, value):
        with pytest.raises(ConfigError):
            parse_energy(value)

    def test_rejects_unknown_units(self):
        with pytest.raises(ConfigError):
            parse_energy(1.0, "keV")


class TestEnvironment:

    def test_expand(self, monkeypatch):
        monkeypatch.setenv("QEX_TEST_Q", "1.02")
        assert expand_env_vars("${QEX_TEST_Q}") == "1.02"

    def test_default(self, monkeypatch):
        monkeypatch.delenv("QEX_TEST_Q", raising=False)
        assert expand_env_vars("${QEX_TEST_Q:-1.01}") == "1.01"
        assert expand_env_vars("${QEX_TEST_Q}") == ""


class TestParseScenario:

    def test_single(self):
        config = parse_scenario(single(q=1.01, n=1, linewidth="branch"))
        assert config.kind == "single"
        assert config.params["g"] == pytest.approx(200e-6, rel=1e-15)
        assert config.params["n"] == 1
        assert config.params["linewidth"] == "branch"
        assert config.grid == EnergyGrid(1.7485, 1.7515, 11)
        assert config.output_name == "single_0.csv"
        assert config.value_column == "S"

    def test_units_are_normalised(self):
        config = parse_scenario({
            "kind": "absorption_linear",
            "units": "meV",
            "params": {"omega": 1500, "omega_ex": 1574, "g": 0.2, "eta": "50ueV"},
            "grid": {"start": 1572, "stop": 1576, "points": 5},
        })
        assert config.units == "eV"
        assert config.params["omega_ex"] == pytest.approx(1.574, rel=1e-15)
        assert config.params["eta"] == pytest.approx(50e-6, rel=1e-15)
        assert config.grid.stop == pytest.approx(1.576, rel=1e-15)
        assert config.value_column == "alpha1"

    def test_block_reference(self):
        blocks = {"cavity": {"omega": 1.75, "omega_ex": 1.75, "g": 2e-4, "n": 1}}
        config = parse_scenario(
            {"kind": "single", "params": {"use": "$cavity", "q": 1.02}, "grid": GRID}, blocks
        )
        assert config.params["q"] == 1.02
        assert config.params["n"] == 1

    @pytest.mark.parametrize("data", [
        {**single(), "kind": "triple"},
        single(temperature=4.0),
        {"kind": "single", "params": {"omega": 1.75}, "grid": GRID},
        {"kind": "single", "params": single()["params"]},
        {**single(), "grid": {"start": 2.0, "stop": 1.0, "points": 11}},
        {**single(), "grid": {"start": 1.0, "stop": 2.0}},
        single(n=1.5),
        single(linewidth="wide"),
        single(g="strong"),
        {**single(), "params": "$missing"},
        {**single(), "units": "keV"},
    ])
    def test_rejects_invalid(self, data):
        with pytest.raises(ConfigError):
            parse_scenario(data)


class TestDocuments:

    def test_repository_config(self, monkeypatch):
        monkeypatch.delenv("QEX_Q", raising=False)
        configs = load_scenarios(REPO_CONFIG)
        by_name = {c.name: c for c in configs}
        assert [c.kind for c in configs] == ["single", "single", "qpol", "two_mode", "absorption_linear"]
        assert by_name["single_q1"].grid == EnergyGrid(1.7485, 1.7515, 3001)
        assert by_name["single_deformed"].params["q"] == 1.01
        assert by_name["two_excitons"].params["omega_ex2"] == pytest.approx(1.77, rel=1e-15)
        assert by_name["two_excitons"].grid.points == 4001

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("QEX_Q", "1.015")
        configs = load_scenarios(REPO_CONFIG)
        assert {c.name: c for c in configs}["single_deformed"].params["q"] == 1.015

    def test_single_scenario_document(self):
        configs = parse_document(single(q=1.01))
        assert len(configs) == 1

    def test_defaults_merge(self):
        document = {
            "defaults": {"grid": GRID, "params": {"gamma_ph": "40ueV"}},
            "scenarios": [
                {"kind": "single", "params": {"omega": 1.75, "omega_ex": 1.75, "g": 2e-4}},
                {"kind": "single", "params": {"omega": 1.75, "omega_ex": 1.76, "g": 2e-4, "gamma_ph": 0.0}},
            ],
        }
        first, second = parse_document(document)
        assert first.params["gamma_ph"] == pytest.approx(40e-6, rel=1e-15)
        assert second.params["gamma_ph"] == 0.0
        assert first.grid == second.grid

    def test_duplicate_outputs(self):
        document = {"scenarios": [{**single(), "name": "a"}, {**single(), "name": "b", "output": "a.csv"}]}
        with pytest.raises(ConfigError):
            parse_document(document)

    @pytest.mark.parametrize("document", [[1, 2], {"scenarios": []}, {"scenarios": [1]}, {"blocks": [1]}])
    def test_rejects_malformed_documents(self, document):
        with pytest.raises(ConfigError):
            parse_document(document)

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("scenarios: [\n  kind: single\n")
        with pytest.raises(ConfigError):
            load_scenarios(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_scenarios(tmp_path / "absent.yaml")


class TestPresets:

    def test_figure_sets(self):
        assert sorted(PRESETS) == ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"]
        assert [c.output_name for c in preset("fig1")] == ["fig1_q1.000.csv", "fig1_q1.010.csv", "fig1_q1.015.csv"]
        assert len(preset("fig5")) == 9
        assert {c.kind for c in preset("fig6")} == {"absorption_third"}

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            preset("fig9")

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_serialize_round_trip(self, name):
        for config in preset(name):
            assert parse_scenario(serialize_scenario(config)) == config

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_yaml_round_trip(self, name):
        configs = preset(name)
        assert parse_document(yaml.safe_load(dump_scenarios(configs))) == configs

    def test_presets_are_configs(self):
        assert all(isinstance(c, ScenarioConfig) for name in PRESETS for c in preset(name))
