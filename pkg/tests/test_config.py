"""Scenario-file parsing, validation errors and round-tripping."""
import pytest

from qfiber.config import ConfigError, parse_config, render_config
from qfiber.models import BSParams, MultimodeParams, SpFWMParams

BS_TEXT = """
# reference frequency-translation scenario
model = bs
bs.gamma = 1.0
bs.pump_power = 1.0
bs.alpha_s = 0.01
bs.alpha_i = 0.01
bs.ri_span = 0.1
bs.ri_span_minus_gap = 0.1
bs.ri_span_plus_gap = 0.1
bs.length_km = 5.0
"""

MULTI_TEXT = """
model = multimode
grid.mode_indices = -1 0 1
grid.delta_w = 1e12
grid.beta = 0 0 0
grid.alpha = 0.01 0 0.01
grid.raman_real = 0:1 1:1 2:1
grid.raman_imag = 1:0.1
grid.gamma = 1.0
grid.n_max = 2
grid.pump_power.1 = 0.5
run.length_km = 1.0
"""

SEMI_TEXT = """
model = semiclassical
grid.mode_indices = 0 1
grid.delta_w = 1e12
grid.beta = 0 0.2
grid.alpha = 0 0
grid.raman_real = 0:1
grid.gamma = 1.0
semiclassical.amplitudes = 2.5e-12 0 1e-13 -1e-13
run.length_km = 2.0
run.step_km = 0.01
"""


def test_reference_parameter_block_parses():
    config = parse_config(BS_TEXT)
    assert config.model == "bs"
    p = config.params
    assert isinstance(p, BSParams)
    assert p.gamma == 1.0 and p.pump_power == 1.0
    assert p.alpha_s == 0.01 and p.alpha_i == 0.01
    assert p.rr_gap == 1.0 and p.rr_span == 1.0
    assert p.ri_span == 0.1 and p.ri_span_minus_gap == 0.1 and p.ri_span_plus_gap == 0.1
    assert config.length_km == 5.0
    assert config.initial_state == ("vacuum",)
    assert config.integrator.step_km == 1e-3


def test_empty_file_lists_required_keys():
    with pytest.raises(ConfigError) as err:
        parse_config("")
    assert any("model" in msg for _, msg in err.value.problems)


def test_range_error_names_key_and_line():
    with pytest.raises(ConfigError) as err:
        parse_config("model = bs\nbs.gamma = -1\nbs.pump_power = 1\nbs.length_km = 1\n")
    problems = err.value.problems
    assert any("bs.gamma" in msg and ln == 2 for ln, msg in problems)


def test_unknown_key_reported_with_line():
    with pytest.raises(ConfigError) as err:
        parse_config(BS_TEXT + "bs.bogus = 3\n")
    assert any("bs.bogus" in msg for _, msg in err.value.problems)


def test_unknown_model():
    with pytest.raises(ConfigError):
        parse_config("model = quark\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config(BS_TEXT + "bs.gamma = 2.0\n")
    assert any("duplicate" in msg for _, msg in err.value.problems)


def test_malformed_line_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config("model = bs\nnot a key value pair\n")
    assert any(ln == 2 for ln, _ in err.value.problems)


def test_missing_required_model_key():
    with pytest.raises(ConfigError) as err:
        parse_config("model = spfwm\nspfwm.gamma = 1.0\n")
    assert any("spfwm.pump_power" in msg for _, msg in err.value.problems)


def test_initial_state_parsing():
    config = parse_config(BS_TEXT + "initial_state = fock 1 0\n")
    assert config.initial_state == ("fock", 1, 0)
    config = parse_config(BS_TEXT + "initial_state = coherent 0.1 0.2\n")
    assert config.initial_state == ("coherent", 0.1 + 0j, 0.2 + 0j)
    with pytest.raises(ConfigError):
        parse_config(BS_TEXT + "initial_state = fock 1\n")
    with pytest.raises(ConfigError):
        parse_config(BS_TEXT + "initial_state = squeezed 1 0\n")


def test_step_must_be_positive():
    with pytest.raises(ConfigError) as err:
        parse_config(BS_TEXT + "run.step_km = -0.001\n")
    assert any("run.step_km" in msg for _, msg in err.value.problems)


def test_comments_and_blank_lines_ignored():
    config = parse_config("# leading comment\n\nmodel = spfwm  # trailing\nspfwm.gamma = 1\nspfwm.pump_power = 2\n")
    assert isinstance(config.params, SpFWMParams)
    assert config.params.pump_power == 2.0


def test_multimode_grid_parses():
    config = parse_config(MULTI_TEXT)
    p = config.params
    assert isinstance(p, MultimodeParams)
    assert p.mode_freqs == (-1e12, 0.0, 1e12)
    assert 1 in p.pump_substitutions
    assert p.n_max == 2
    assert config.length_km == 1.0


def test_semiclassical_parses():
    config = parse_config(SEMI_TEXT)
    assert config.amplitudes == (2.5e-12 + 0j, 1e-13 - 1e-13j)
    assert config.mean_field.step_km == 0.01


def test_semiclassical_amplitude_count_checked():
    with pytest.raises(ConfigError):
        parse_config(SEMI_TEXT.replace("2.5e-12 0 1e-13 -1e-13", "2.5e-12 0"))


@pytest.mark.parametrize("text", [BS_TEXT, MULTI_TEXT, SEMI_TEXT])
def test_round_trip(text):
    config = parse_config(text)
    assert parse_config(render_config(config)) == config


def test_round_trip_with_nondefault_state_and_run_block():
    text = BS_TEXT + "initial_state = coherent 0.1 -0.25\nrun.step_km = 0.002\nrun.samples = 11\nrun.rehermitize = true\n"
    config = parse_config(text)
    assert parse_config(render_config(config)) == config
