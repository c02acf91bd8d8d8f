"""Tests for RunConfig and the key = value configuration parser."""

import logging
import math

import pytest

from clapp_chaos.config.settings import RunConfig, get_published_config, parse_value
from clapp_chaos.core.exceptions import ConfigError, InputError
from clapp_chaos.parsers.config_parser import (
    ConfigParser,
    apply_overrides,
    parse_config,
    resolve_config,
)


class TestRunConfig:
    def test_defaults_are_the_published_operating_point(self):
        config = get_published_config()
        assert (config.v_cc, config.r1, config.r2, config.r_e) == (12.0, 5e3, 7e3, 500.0)
        assert (config.c1, config.c2, config.c3, config.l3) == (2e-12, 2e-12, 0.1e-12, 0.753e-9)
        assert (config.i_s, config.eta, config.beta) == (47.1e-12, 0.7894, 100.0)

    def test_embedded_parameter_sets(self):
        config = RunConfig(r_e=10.0, abs_tol_v=1e-8, abs_tol_i=1e-11)
        assert config.circuit.r_e == 10.0
        assert config.bjt.eta == 0.7894
        assert config.integrator.abs_tol == (1e-8, 1e-8, 1e-8, 1e-11)

    def test_validate_collects_all_problems(self):
        config = RunConfig(c1=-1e-12, sweep_count=0, phase_x="v_c2", phase_y="v_c2")
        is_valid, errors = config.validate()
        assert not is_valid
        keys = {error.split(":")[0] for error in errors}
        assert {"c1", "sweep_count", "phase_y"} <= keys

    def test_check_raises_with_key(self):
        with pytest.raises(ConfigError) as info:
            RunConfig(sweep_backend="cluster").check()
        assert info.value.key == "sweep_backend"

    def test_from_dict_rejects_unknown_key(self):
        with pytest.raises(ConfigError) as info:
            RunConfig.from_dict({"r_ee": 3.0})
        assert "did you mean 'r_e'" in str(info.value)

    def test_save_and_load(self, tmp_path):
        config = RunConfig(r_e=10.0, beta=150.0, initial_step=1e-15, output_dir="results")
        path = tmp_path / "run.cfg"
        config.save(str(path))
        assert RunConfig.from_file(str(path)) == config


class TestParseValue:
    def test_si_suffix(self):
        assert parse_value("c3", "0.1p") == 0.1e-12
        assert parse_value("l3", "0.753n") == 0.753e-9
        assert parse_value("r1", "5k") == 5000.0

    def test_integer_key(self):
        assert parse_value("sweep_count", "50") == 50
        with pytest.raises(ConfigError):
            parse_value("sweep_count", "2.5")

    def test_optional_key(self):
        assert parse_value("initial_step", "none") is None
        assert parse_value("iv_file", "data/iv.csv") == "data/iv.csv"

    def test_choice_key_is_lowercased(self):
        assert parse_value("sweep_spacing", "LOG") == "log"

    def test_malformed_number(self):
        with pytest.raises(ConfigError) as info:
            parse_value("r_e", "ten")
        assert info.value.key == "r_e"


class TestConfigParser:
    def test_empty_text_gives_defaults(self):
        assert parse_config("") == RunConfig()

    def test_comments_and_suffixes(self):
        config = parse_config("# chaos\nv_cc = 12\nc3 = 0.1p   # tank\n\nbeta = 120\n")
        assert config.c3 == 0.1e-12
        assert config.beta == 120.0

    def test_invariant_violation_names_key_and_line(self):
        with pytest.raises(ConfigError) as info:
            parse_config("beta = 100\nc1 = -1e-12\n")
        assert info.value.key == "c1"
        assert info.value.line == 2
        assert str(info.value).startswith("line 2: c1")

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as info:
            parse_config("bogus_key = 3\n")
        assert "unknown key 'bogus_key'" in str(info.value)
        assert info.value.line == 1

    def test_missing_equals(self):
        with pytest.raises(ConfigError) as info:
            parse_config("beta = 100\nr_e 10\n")
        assert info.value.line == 2

    def test_duplicate_key(self):
        with pytest.raises(ConfigError) as info:
            parse_config("r_e = 10\nr_e = 20\n")
        assert "first set on line 1" in str(info.value)

    def test_byte_order_mark_and_crlf(self):
        assert parse_config("\ufeffbeta = 90\r\nr_e = 20\r\n").r_e == 20.0

    def test_dump_round_trip(self):
        config = RunConfig(r_e=12.345678901234567, c3=0.1e-12, max_step=math.inf, fixed_step=1e-13)
        assert parse_config(config.dump()) == config

    def test_explicit_keys(self):
        parser = ConfigParser()
        parser.parse("r_e = 10\nbeta = 120\n")
        assert parser.explicit_keys == ["r_e", "beta"]

    def test_missing_beta_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            parse_config("r_e = 10\n")
        assert "beta not set" in caplog.text

    def test_explicit_beta_does_not_warn(self, caplog):
        with caplog.at_level(logging.WARNING):
            parse_config("beta = 100\n")
        assert "beta not set" not in caplog.text


class TestOverrides:
    def test_override_wins(self):
        config = apply_overrides(RunConfig(), ["r_e=10", "sweep_spacing = linear"])
        assert config.r_e == 10.0
        assert config.sweep_spacing == "linear"

    def test_malformed_override(self):
        with pytest.raises(ConfigError):
            apply_overrides(RunConfig(), ["r_e"])

    def test_invalid_override_value(self):
        with pytest.raises(ConfigError):
            apply_overrides(RunConfig(), ["l3=-1"])

    def test_precedence(self, tmp_path, caplog):
        path = tmp_path / "run.cfg"
        path.write_text("r_e = 20\nbeta = 90\n", encoding="utf-8")
        with caplog.at_level(logging.WARNING):
            config = resolve_config(str(path), ["r_e=30"])
        assert (config.r_e, config.beta) == (30.0, 90.0)
        assert "beta not set" not in caplog.text

    def test_beta_from_override_does_not_warn(self, caplog):
        with caplog.at_level(logging.WARNING):
            resolve_config(None, ["beta=110"])
        assert "beta not set" not in caplog.text

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError) as info:
            resolve_config(str(tmp_path / "missing.cfg"))
        assert info.value.exit_code == 1
