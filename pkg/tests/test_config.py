import math

import pytest

from fastgates.config import (ConfigError, RunConfig, load_config,
                              parse_config, serialize_config, with_seed)


def test_defaults():
    config = parse_config("")
    assert config == RunConfig()
    assert config.trap.frequency_mhz == 1.2
    assert config.trap.axial_frequency == pytest.approx(2 * math.pi * 1.2e6)
    assert config.scheme.family == "frag"
    assert config.laser.repetition_rate_ghz == 5.0
    assert config.motional.nbar == (0.1,)
    assert config.optimizer.objective == "min-time"
    assert config.output.formats == ("csv", "json")


def test_round_trip_is_identity():
    text = """
[trap]
frequency_mhz = 2.5
mass_amu = 171
wavelength_nm = 369.5
ion_count = 5

[scheme]
family = gzc
convention = symmetric
target_pair = 1, 5

[laser]
repetition_rate_ghz = 0.3

[motional]
nbar = 0.1, 0.2, 0.3, 0.4, 0.5

[optimizer]
objective = max-fidelity
rng_seed = 42
n_min = 2
n_max = 99
overlap_margin = 1.5
cycles = 3

[output]
directory = results
formats = json
"""
    config = parse_config(text)
    assert parse_config(serialize_config(config)) == config
    assert config.scheme.target_pair == (1, 5)
    assert config.motional.nbar == (0.1, 0.2, 0.3, 0.4, 0.5)


def test_round_trip_default_config():
    assert parse_config(serialize_config(RunConfig())) == RunConfig()


def test_infinite_repetition_rate():
    config = parse_config("[laser]\nrepetition_rate_ghz = inf\n")
    assert math.isinf(config.laser.repetition_rate)
    assert parse_config(serialize_config(config)) == config


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config("[lazer]\nrepetition_rate_ghz = 5\n")


def test_bad_value_reports_field_path():
    with pytest.raises(ConfigError, match="trap.frequency_mhz"):
        parse_config("[trap]\nfrequency_mhz = fast\n")
    with pytest.raises(ConfigError, match="trap.frequency_mhz"):
        parse_config("[trap]\nfrequency_mhz = -1\n")


def test_single_ion_crystal_config_parses():
    # Crystal-only runs may shrink the crystal below the default pair; the
    # pair is checked where a gate is designed.
    config = parse_config("[trap]\nion_count = 1\n")
    assert config.trap.ion_count == 1
    assert config.scheme.target_pair == (1, 2)


def test_bad_family_rejected():
    with pytest.raises(ConfigError, match="scheme.family"):
        parse_config("[scheme]\nfamily = molmer\n")


def test_n_range_order_enforced():
    with pytest.raises(ConfigError, match="n_min"):
        parse_config("[optimizer]\nn_min = 10\nn_max = 5\n")


def test_bad_output_format_rejected():
    with pytest.raises(ConfigError, match="output.formats"):
        parse_config("[output]\nformats = xml\n")


def test_with_seed():
    config = with_seed(RunConfig(), 7)
    assert config.optimizer.rng_seed == 7
    assert config.trap == RunConfig().trap


def test_load_config(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[optimizer]\nrng_seed = 9\n")
    assert load_config(str(path)).optimizer.rng_seed == 9
